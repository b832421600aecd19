#pragma once

#include <map>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

namespace dlcoho {

// Root of unity stored as an exponent of exp(2 pi i / 60). The named labels
// cover every eigenvalue scalar that occurs in the tables; anything else
// prints as "z60^k".
class Unity {
 public:
  Unity() = default;
  static Unity from_exponent(int k);
  static Unity parse(const std::string& label);  // "1", "-1", "i", "-θ²", "ζ³", ...
  int exponent() const { return k_; }
  int order() const;
  std::string label() const;
  Unity operator*(Unity o) const { return from_exponent(k_ + o.k_); }
  Unity pow(int n) const { return from_exponent(k_ * n); }
  auto operator<=>(const Unity&) const = default;

 private:
  int k_ = 0;
};

struct Grade {
  int h = 0;
  int t2 = 0;  // twice the exponent of t
  auto operator<=>(const Grade&) const = default;
};

struct Term {
  std::string chr;
  Unity unity;
  auto operator<=>(const Term&) const = default;
};

// Name of the formal unit character carried by G_m / G_a factors.
inline const std::string kUnitChar = "1";

class CharSet;

// Bigraded polynomial with coefficients in the free commutative monoid on
// (character, eigenvalue scalar) pairs. The group tag is empty for scalar
// polynomials (every character is the unit).
class CohPoly {
 public:
  using Coeff = std::map<Term, long long>;

  CohPoly() = default;
  explicit CohPoly(std::string group) : group_(std::move(group)) {}
  static CohPoly unit();
  static CohPoly monomial(int h, int t2, long long mult = 1);  // scalar h^h t^(t2/2)
  static CohPoly gm_factor();  // h + h^2 t
  static CohPoly ga_factor();  // h^2 t

  const std::string& group() const { return group_; }
  bool is_scalar() const;
  bool empty() const { return data_.empty(); }
  const std::map<Grade, Coeff>& data() const { return data_; }

  void add_term(Grade g, const Term& t, long long mult);
  long long coeff(Grade g, const std::string& chr, std::optional<Unity> u = {}) const;
  long long total_mult() const;
  std::optional<int> min_h() const;
  std::optional<int> max_h() const;

  CohPoly operator+(const CohPoly& o) const;
  CohPoly operator*(const CohPoly& o) const;
  bool operator==(const CohPoly& o) const;
  bool operator!=(const CohPoly& o) const { return !(*this == o); }

  // Human-readable form, e.g. "h^6 St + 3 h^7 t^2 St + h^8 t^3 (2 St + 2 Id)".
  std::string to_string() const;

 private:
  std::string group_;
  std::map<Grade, Coeff> data_;
};

CohPoly add(const CohPoly& p, const CohPoly& q);
CohPoly mul(const CohPoly& p, const CohPoly& q);
CohPoly shift(const CohPoly& p, int dh, int dt2);
CohPoly scale(const CohPoly& p, Unity u);
CohPoly times(const CohPoly& p, long long n);
CohPoly power(const CohPoly& p, int n);

// H_c((G_m)^d x X_L(v)) [-2e](e).
CohPoly gm_ga_product(int d, int e, const CohPoly& base);

// Quotient of a Coxeter variety of L_J by U_I cap L_J, given the Coxeter
// table of L_I: a factor (h + h^2 t) for each node of J outside I.
CohPoly coxeter_quotient(int dropped_nodes, const CohPoly& levi_coxeter);

CohPoly isotypic_slice(const CohPoly& p, const std::string& chr, std::optional<Unity> u = {});

// Serialization: [{"h","t2","terms":[{"char","unity","mult"}]}], sorted.
nlohmann::json to_json(const CohPoly& p);
CohPoly poly_from_json(const nlohmann::json& j, const std::string& group);

// ---------------------------------------------------------------------------
// Character sets

enum class SeriesKind { Principal, Cuspidal, HarishChandra };

struct CharInfo {
  std::string name;
  SeriesKind kind = SeriesKind::Principal;
  std::string cuspidal;  // cuspidal support for HarishChandra
  Unity unity;           // Frobenius eigenvalue scalar
  int dim = 1;           // dimension of the relative Weyl group character
  bool coxeter = false;  // occurs in the cohomology of a Coxeter variety
};

class CharSet {
 public:
  CharSet() = default;
  CharSet(std::string group, std::vector<CharInfo> chars);
  const std::string& group() const { return group_; }
  const std::vector<CharInfo>& chars() const { return chars_; }
  const CharInfo* find(const std::string& name) const;
  const CharInfo& at(const std::string& name) const;  // ConfigError if absent
  // "1" for the principal series, otherwise the name of the cuspidal support.
  std::string support(const std::string& name) const;

 private:
  std::string group_;
  std::vector<CharInfo> chars_;
  std::map<std::string, std::size_t> index_;
};

CharSet load_charset(const std::string& path);
CharSet charset_from_json(const nlohmann::json& j, const std::string& where);

// Parses sums such as "h^6 St + 3 h^7 t^2 St + h^10 t^9/2 E7[i]@i". Each term
// is [coefficient] [h^a] [t^b | t^b/2 | t] label[@unity]; the unity defaults
// to the character's eigenvalue scalar.
CohPoly parse_poly(const std::string& expr, const CharSet& cs);
// Same syntax without h/t, e.g. "3 St + ρ_{θ} + 2 ρ_{r}".
std::map<std::string, long long> parse_combination(const std::string& expr, const CharSet& cs);

// Checks that every label exists and that unities are consistent.
void validate_poly(const CohPoly& p, const CharSet& cs);

CohPoly filter_support(const CohPoly& p, const CharSet& cs, const std::string& support);

struct RestrictionTable {
  std::string group;
  std::string levi;
  std::map<std::string, std::map<std::string, long long>> entries;
  std::map<std::string, std::string> sources;
};

RestrictionTable load_restriction(const std::string& path, const CharSet& g, const CharSet& l);
RestrictionTable restriction_from_json(const nlohmann::json& j, const CharSet& g, const CharSet& l,
                                       const std::string& where);

struct Block {
  std::string group;
  int d = 0;
  std::vector<std::string> members;
};

Block load_block(const std::string& path, const CharSet& cs);
Block block_from_json(const nlohmann::json& j, const CharSet& cs, const std::string& where);

struct TableFile {
  std::string group;
  std::string element;  // word of the element whose variety the table describes, if any
  std::string source;
  CohPoly poly;
};

TableFile load_table(const std::string& path, const CharSet& cs);
TableFile table_from_json(const nlohmann::json& j, const CharSet& cs, const std::string& where);

struct LiftAlternative {
  Grade grade;
  Unity unity;
  std::vector<std::map<std::string, long long>> solutions;
};

struct LiftResult {
  CohPoly lifted;
  bool unique = true;
  bool resolved_by_constituents = false;
  std::vector<LiftAlternative> ambiguities;
};

// Finds the G-level polynomial over block members whose Harish-Chandra
// restriction is the given L-level polynomial, grade by grade.
LiftResult hc_lift(const CohPoly& quotient, const RestrictionTable& restr, const std::vector<std::string>& block,
                   const CharSet& g);

// Settles remaining per-grade choices by requiring every listed member to
// have nonzero alternating multiplicity sum_h (-1)^h, as it must when the
// members are the constituents of the Deligne-Lusztig character. Leaves the
// result untouched unless exactly one choice survives.
void resolve_by_constituents(LiftResult& res, const std::vector<std::string>& members);

}  // namespace dlcoho
