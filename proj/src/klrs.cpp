#include "dlcoho/klrs.hpp"

#include <algorithm>

#include "dlcoho/error.hpp"
#include "dlcoho/pieces.hpp"

namespace dlcoho {

IntPoly poly_trim(IntPoly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

IntPoly poly_add(const IntPoly& a, const IntPoly& b) {
  IntPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return poly_trim(std::move(r));
}

IntPoly poly_sub(const IntPoly& a, const IntPoly& b) {
  IntPoly nb = b;
  for (auto& c : nb) c = -c;
  return poly_add(a, nb);
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {};
  IntPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return poly_trim(std::move(r));
}

IntPoly poly_shift(const IntPoly& a, int k) {
  if (a.empty()) return {};
  IntPoly r(k, 0);
  r.insert(r.end(), a.begin(), a.end());
  return r;
}

std::string poly_string(const IntPoly& p) {
  if (p.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0) continue;
    long long c = p[i];
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    long long a = c < 0 ? -c : c;
    if (i == 0 || a != 1) out += std::to_string(a);
    if (i >= 1) out += "q";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

std::string KLContext::key(const WeylElt& x, const WeylElt& w) {
  std::string k(x.perm().begin(), x.perm().end());
  k.append(w.perm().begin(), w.perm().end());
  return k;
}

const std::vector<WeylElt>& KLContext::interval(const WeylElt& w) {
  std::string k(w.perm().begin(), w.perm().end());
  auto it = intervals_.find(k);
  if (it == intervals_.end()) it = intervals_.emplace(k, lower_interval(w)).first;
  return it->second;
}

IntPoly KLContext::r_polynomial(const WeylElt& x, const WeylElt& w) {
  if (!bruhat_leq(x, w)) throw UsageError("R-polynomial requested for x not below w");
  return r_rec(x, w);
}

IntPoly KLContext::r_rec(const WeylElt& x, const WeylElt& w) {
  if (x == w) return {1};
  if (x.length() >= w.length() || !bruhat_leq(x, w)) return {};
  auto k = key(x, w);
  if (auto it = r_memo_.find(k); it != r_memo_.end()) return it->second;
  int s = __builtin_ctz(w.left_descents());
  WeylElt sw = w.simple_times(s), sx = x.simple_times(s);
  IntPoly r;
  if (x.has_left_descent(s))
    r = r_rec(sx, sw);
  else
    r = poly_add(poly_mul({-1, 1}, r_rec(x, sw)), poly_shift(r_rec(sx, sw), 1));
  r_memo_[k] = r;
  return r;
}

IntPoly KLContext::kl_polynomial(const WeylElt& x, const WeylElt& w) {
  if (!bruhat_leq(x, w)) throw UsageError("KL polynomial requested for x not below w");
  return p_rec(x, w);
}

long long KLContext::mu(const WeylElt& z, const WeylElt& w) {
  int diff = w.length() - z.length();
  if (diff <= 0 || diff % 2 == 0 || !bruhat_leq(z, w)) return 0;
  IntPoly p = p_rec(z, w);
  std::size_t deg = (diff - 1) / 2;
  return deg < p.size() ? p[deg] : 0;
}

IntPoly KLContext::p_rec(const WeylElt& x, const WeylElt& w) {
  if (x == w) return {1};
  if (!bruhat_leq(x, w)) return {};
  // P_{x,w} = P_{sx,w} whenever sw < w; climb until L(w) is inside L(x).
  if (NodeSet up = w.left_descents() & ~x.left_descents())
    return p_rec(x.simple_times(__builtin_ctz(up)), w);
  auto k = key(x, w);
  if (auto it = p_memo_.find(k); it != p_memo_.end()) return it->second;
  int s = __builtin_ctz(w.left_descents());
  WeylElt v = w.simple_times(s), sx = x.simple_times(s);
  int c = x.has_left_descent(s) ? 1 : 0;
  IntPoly p = poly_add(poly_shift(p_rec(sx, v), 1 - c), poly_shift(p_rec(x, v), c));
  for (const auto& z : interval(v)) {
    if (z == v || !z.has_left_descent(s) || !bruhat_leq(x, z)) continue;
    long long m = mu(z, v);
    if (m == 0) continue;
    IntPoly t = poly_shift(p_rec(x, z), (w.length() - z.length()) / 2);
    for (auto& cf : t) cf *= m;
    p = poly_sub(p, t);
  }
  for (long long cf : p)
    if (cf < 0) throw ContradictionError("negative Kazhdan-Lusztig coefficient");
  p_memo_[k] = p;
  return p;
}

IntPoly r_polynomial(const WeylElt& x, const WeylElt& w) {
  KLContext ctx;
  return ctx.r_polynomial(x, w);
}

IntPoly kl_polynomial(const WeylElt& x, const WeylElt& w) {
  KLContext ctx;
  return ctx.kl_polynomial(x, w);
}

IntPoly poincare_poly(const WeylElt& w) {
  IntPoly p(w.length() + 1, 0);
  for (const auto& v : lower_interval(w)) ++p[v.length()];
  return poly_trim(p);
}

SmoothnessReport rational_smoothness(const WeylElt& w) {
  SmoothnessReport rep;
  KLContext ctx;
  for (const auto& v : lower_interval(w)) {
    IntPoly p = ctx.kl_polynomial(v, w);
    if (p != IntPoly{1}) rep.witnesses.emplace_back(v, p);
  }
  rep.smooth = rep.witnesses.empty();
  IntPoly pp = poincare_poly(w);
  rep.palindromic = std::equal(pp.begin(), pp.end(), pp.rbegin());
  if (rep.smooth != rep.palindromic)
    throw ContradictionError("KL and Poincare smoothness criteria disagree for " + w.to_string());
  return rep;
}

bool rationally_smooth(const WeylElt& w) { return rational_smoothness(w).smooth; }

}  // namespace dlcoho
