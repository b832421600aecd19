#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dlcoho/weyl.hpp"

namespace dlcoho {

// GF(p^k) with p^k <= 256, elements encoded as base-p digit vectors of the
// residue modulo the lexicographically first monic irreducible polynomial.
class SmallField {
 public:
  SmallField(int p, int k);
  static SmallField of_order(int q);  // UsageError unless q is a prime power <= 256

  int p() const { return p_; }
  int k() const { return k_; }
  int size() const { return q_; }
  std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return add_[a * q_ + b]; }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return mul_[a * q_ + b]; }
  std::uint8_t neg(std::uint8_t a) const { return neg_[a]; }
  std::uint8_t inv(std::uint8_t a) const;  // UsageError on 0
  std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return add(a, neg(b)); }
  std::uint8_t pow(std::uint8_t a, long long e) const;
  // x -> x^(p^r)
  std::uint8_t frobenius(std::uint8_t a, int r = 1) const;

 private:
  int p_, k_, q_;
  std::vector<std::uint8_t> add_, mul_, neg_, inv_;
};

// Column-echelon canonical form of a complete flag in F^n: column j spans
// the j-th step modulo the earlier ones, its last nonzero entry (the pivot)
// is 1, and it vanishes in the pivot rows of earlier columns.
struct Flag {
  int n = 0;
  std::vector<std::uint8_t> m;  // column-major, m[j * n + i]
  std::uint8_t at(int i, int j) const { return m[j * n + i]; }
  bool operator==(const Flag&) const = default;
};

Flag canonical_flag(const SmallField& f, int n, std::vector<std::uint8_t> cols);
Flag standard_flag(int n);

long long flag_count(int n, long long q);  // prod_{i=1..n} (q^i - 1)/(q - 1)
inline constexpr long long kFlagGuard = 100000000;

// Visits every complete flag of F^n exactly once. Throws ResourceError when
// the flag count exceeds the guard.
void enumerate_flags(int n, const SmallField& f, const std::function<void(const Flag&)>& visit,
                     long long guard = kFlagGuard);

// Permutation w (0-based, w[j] = row) with dim(P_i cap R_j) = #{k < j : w[k] < i}.
std::vector<int> relative_position_perm(const SmallField& f, const Flag& p, const Flag& r);
// The same position as an element of W(A_{n-1}).
WeylElt relative_position(const RootSystem& an, const SmallField& f, const Flag& p, const Flag& r);
WeylElt perm_to_weyl(const RootSystem& an, const std::vector<int>& perm);

// Entrywise x -> x^q followed by re-canonicalization.
Flag frobenius(const SmallField& f, const Flag& p, int q);

// N[y][w] = #{p over F_{q^m} : inv(std, p) = y and inv(p, F_q p) = w},
// keyed by the permutations' Weyl elements.
struct PointTable {
  int n = 0, q = 0, m = 0;
  std::map<std::pair<WeylElt, WeylElt>, long long> counts;
  long long flags = 0;
};
PointTable tabulate_points(const RootSystem& an, int q, int m, long long guard = kFlagGuard);

// Points of the piece of X(w) lying over P_I x B / B, over F_{q^m}.
long long dl_piece_points(const WeylElt& w, NodeSet I, const WeylElt& x, int q, int m, long long guard = kFlagGuard);
long long piece_points(const PointTable& t, const WeylElt& w, NodeSet I, const WeylElt& x);

struct CrossCase {
  WeylElt w;
  NodeSet I = 0;
  WeylElt x;
  bool predicted_nonempty = false;
  std::map<int, long long> points;  // m -> count, for the degrees that ran
};

struct CrossReport {
  int n = 0, q = 0;
  std::vector<int> degrees_run;
  std::vector<int> degrees_skipped;  // over the flag guard
  int cases = 0;
  std::vector<CrossCase> hard;     // predicted empty, points found
  std::vector<CrossCase> flagged;  // predicted non-empty, no points up to the cap
};

// Every (w, I, x) of A_{n-1} against piece_nonempty_r1, over F_{q^m} for
// m = 1..max_m.
CrossReport cross_validate(int n, int q, int max_m, long long guard = kFlagGuard);

}  // namespace dlcoho
