#pragma once

#include <string>
#include <vector>

#include "dlcoho/weyl.hpp"

namespace dlcoho {

// Positive braid in left-greedy normal form. Factors are non-identity Weyl
// group elements (the simple braids) and every left descent of a factor is
// a right descent of its predecessor.
class BraidElt {
 public:
  BraidElt() = default;

  static BraidElt lift(const WeylElt& w);
  static BraidElt from_factors(std::vector<WeylElt> factors);  // normalises

  const std::vector<WeylElt>& factors() const { return factors_; }
  int length() const;
  bool is_identity() const { return factors_.empty(); }
  std::string to_string() const;  // "[t1 t2 | t3]"

  bool operator==(const BraidElt& o) const { return factors_ == o.factors_; }

 private:
  std::vector<WeylElt> factors_;
};

BraidElt bmul(const BraidElt& a, const BraidElt& b);
BraidElt bpow(const BraidElt& a, int n);
BraidElt full_twist(const RootSystem& rs);  // pi = w0^2
bool is_root_of_pi(const WeylElt& w, int d);

}  // namespace dlcoho
