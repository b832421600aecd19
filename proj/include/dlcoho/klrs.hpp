#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "dlcoho/weyl.hpp"

namespace dlcoho {

// Integer polynomial in q, coefficient of q^i at index i, trailing zeros trimmed.
using IntPoly = std::vector<long long>;

IntPoly poly_trim(IntPoly p);
IntPoly poly_add(const IntPoly& a, const IntPoly& b);
IntPoly poly_sub(const IntPoly& a, const IntPoly& b);
IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
IntPoly poly_shift(const IntPoly& a, int k);  // times q^k
std::string poly_string(const IntPoly& p);

// Memo tables for one thread of queries. Not safe for concurrent use; give
// each thread its own context.
class KLContext {
 public:
  IntPoly r_polynomial(const WeylElt& x, const WeylElt& w);
  IntPoly kl_polynomial(const WeylElt& x, const WeylElt& w);
  long long mu(const WeylElt& z, const WeylElt& w);

 private:
  IntPoly r_rec(const WeylElt& x, const WeylElt& w);
  IntPoly p_rec(const WeylElt& x, const WeylElt& w);
  const std::vector<WeylElt>& interval(const WeylElt& w);
  static std::string key(const WeylElt& x, const WeylElt& w);
  std::unordered_map<std::string, IntPoly> r_memo_, p_memo_;
  std::unordered_map<std::string, std::vector<WeylElt>> intervals_;
};

IntPoly r_polynomial(const WeylElt& x, const WeylElt& w);
IntPoly kl_polynomial(const WeylElt& x, const WeylElt& w);
IntPoly poincare_poly(const WeylElt& w);

struct SmoothnessReport {
  bool smooth = false;       // P_{v,w} = 1 for all v <= w
  bool palindromic = false;  // Poincare polynomial of [e, w] is palindromic
  std::vector<std::pair<WeylElt, IntPoly>> witnesses;  // v with P_{v,w} != 1
};

// Throws ContradictionError if the two criteria disagree.
SmoothnessReport rational_smoothness(const WeylElt& w);
bool rationally_smooth(const WeylElt& w);

}  // namespace dlcoho
