#include "dlcoho/braid.hpp"

#include "dlcoho/error.hpp"

namespace dlcoho {

namespace {

// Slides letters from b into a until every left descent of b is a right
// descent of a. Returns true when something moved.
bool repair(WeylElt& a, WeylElt& b) {
  bool moved = false;
  while (true) {
    NodeSet slide = b.left_descents() & ~a.right_descents();
    if (!slide) return moved;
    int s = __builtin_ctz(slide);
    a = a.times_simple(s);
    b = b.simple_times(s);
    moved = true;
  }
}

void normalise(std::vector<WeylElt>& f) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<WeylElt> kept;
    for (auto& x : f)
      if (!x.is_identity()) kept.push_back(std::move(x));
    f = std::move(kept);
    for (std::size_t i = 0; i + 1 < f.size(); ++i) changed |= repair(f[i], f[i + 1]);
  }
}

}  // namespace

BraidElt BraidElt::lift(const WeylElt& w) {
  BraidElt b;
  if (!w.is_identity()) b.factors_.push_back(w);
  return b;
}

BraidElt BraidElt::from_factors(std::vector<WeylElt> factors) {
  for (std::size_t i = 1; i < factors.size(); ++i)
    if (factors[i].system_ptr() != factors[0].system_ptr())
      throw UsageError("braid factors from different root systems");
  normalise(factors);
  BraidElt b;
  b.factors_ = std::move(factors);
  return b;
}

int BraidElt::length() const {
  int l = 0;
  for (const auto& f : factors_) l += f.length();
  return l;
}

std::string BraidElt::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out += " | ";
    out += factors_[i].to_string();
  }
  return out + "]";
}

BraidElt bmul(const BraidElt& a, const BraidElt& b) {
  std::vector<WeylElt> f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return BraidElt::from_factors(std::move(f));
}

BraidElt bpow(const BraidElt& a, int n) {
  if (n < 0) throw UsageError("negative braid power");
  BraidElt result, base = a;
  while (n > 0) {
    if (n & 1) result = bmul(result, base);
    n >>= 1;
    if (n) base = bmul(base, base);
  }
  return result;
}

BraidElt full_twist(const RootSystem& rs) {
  WeylElt w0 = rs.longest_element();
  return BraidElt::from_factors({w0, w0});
}

bool is_root_of_pi(const WeylElt& w, int d) {
  if (d < 1) throw UsageError("root order must be positive");
  const auto& rs = w.system();
  if (d * w.length() != 2 * rs.num_positive()) return false;
  return bpow(BraidElt::lift(w), d) == full_twist(rs);
}

}  // namespace dlcoho
