#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlcoho/cohom.hpp"

namespace dlcoho {

// 0 -> a_1 -> ... -> a_k -> 0 with entries known (value) or unknown (nullopt).
struct Feasibility {
  bool feasible = false;
  std::vector<long long> values;  // a witness with unknowns filled in
  std::vector<long long> ranks;   // r_i = rank(a_i -> a_{i+1}), r_k = 0
};

Feasibility feasible_dims(const std::vector<std::optional<long long>>& seq);

// Isotypic slices never interact: every map in the long exact sequence is
// F-equivariant.
struct SliceKey {
  std::string chr;
  Unity unity;
  int t2 = 0;
  auto operator<=>(const SliceKey&) const = default;
};

std::string slice_name(const SliceKey& k);

using Profile = std::map<int, long long>;  // h -> multiplicity, zeros omitted

// Per-slice candidate profiles of a graded object. A slice missing from the
// map is identically zero.
using Family = std::map<SliceKey, std::vector<Profile>>;

Family family_of(const CohPoly& p);
// The sum of the profiles in every slice; throws UsageError on a slice with
// more than one candidate.
CohPoly poly_of(const Family& f, const std::string& group);

// Open, total, closed in the order of the long exact sequence
//   ... -> H^h(open) -> H^h(total) -> H^h(closed) -> H^{h+1}(open) -> ...
enum class Obj { Open = 0, Total = 1, Closed = 2 };
const char* obj_name(Obj o);
Obj parse_obj(const std::string& s);

struct Triangle {
  std::string name;
  std::array<std::optional<Family>, 3> objs;  // nullopt marks the unknown
};

enum class RuleKind { VanishWindow, PlacementAllow, EigenvalueExclude, EulerFixed };

struct Rule {
  RuleKind kind = RuleKind::VanishWindow;
  Obj object = Obj::Total;
  int lo = 0, hi = 0;          // VanishWindow: zero outside [lo, hi]
  std::string chr;             // "@coxeter" selects every character flagged as a Coxeter constituent
  std::vector<Grade> cells;    // PlacementAllow: only here; EigenvalueExclude: never here
  int t2 = 0;                  // EulerFixed slice twist
  long long value = 0;         // EulerFixed: sum_h (-1)^h mult
  std::string source;
};

struct SliceOutcome {
  SliceKey key;
  std::vector<std::array<Profile, 3>> solutions;
  bool truncated = false;
};

struct TriangleSolution {
  std::string name;
  std::vector<SliceOutcome> slices;

  bool unique() const;
  // Every object narrowed to the candidates that occur in some solution.
  Family family(Obj o) const;
  // Throws UsageError if some slice of the object is ambiguous.
  CohPoly value(Obj o, const std::string& group) const;
  // "h^a: [min, max]" per ambiguous slice of the object.
  std::vector<std::string> ambiguity_report(Obj o) const;
};

// Exhaustive enumeration of every assignment of the unknown object that is
// consistent with exactness and the rules, slice by slice. At most one
// object may be unknown. Throws ContradictionError naming the first slice
// with no solution.
TriangleSolution solve_triangle(const Triangle& tri, const std::vector<Rule>& rules, const CharSet& cs);

// Slices where sum_h (-1)^h (total - open - closed) is nonzero.
std::vector<SliceKey> euler_check(const CohPoly& open, const CohPoly& total, const CohPoly& closed);

// Where St_L and Id_L may sit in the total of the quotient triangle. A
// G-character other than St_G or Id_G whose restriction contains St_L or
// Id_L also contains a principal-series L-character different from both, so
// outside the given St_G / Id_G cells these two can only occur in grades
// where the solved slices already show such a companion.
std::vector<Rule> derive_st_id_placements(const CohPoly& solved_principal_total, const CharSet& l,
                                          const std::vector<Grade>& st_cells, const std::vector<Grade>& id_cells,
                                          const std::string& source);

}  // namespace dlcoho
