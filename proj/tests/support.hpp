#pragma once

#include <random>
#include <set>
#include <vector>

#include "dlcoho/weyl.hpp"

namespace testsupport {

inline std::vector<int> random_word(std::mt19937& rng, int rank, int len) {
  std::uniform_int_distribution<int> d(0, rank - 1);
  std::vector<int> w(len);
  for (auto& s : w) s = d(rng);
  return w;
}

inline dlcoho::WeylElt random_elt(std::mt19937& rng, const dlcoho::RootSystem& rs, int len) {
  return rs.from_word(random_word(rng, rs.rank(), len));
}

// Independent Bruhat test: v <= w iff v is the product of a subword of a
// reduced word of w.
inline bool subword_leq(const dlcoho::WeylElt& v, const dlcoho::WeylElt& w) {
  const auto& rs = w.system();
  auto word = w.reduced_word();
  const int n = static_cast<int>(word.size());
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> sub;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) sub.push_back(word[i]);
    if (rs.from_word(sub) == v) return true;
  }
  return false;
}

// A random reduced word of w, obtained by peeling random right descents.
inline std::vector<int> random_reduced_word(std::mt19937& rng, dlcoho::WeylElt w) {
  std::vector<int> rev;
  while (!w.is_identity()) {
    std::vector<int> d;
    for (int s = 0; s < w.system().rank(); ++s)
      if (w.has_right_descent(s)) d.push_back(s);
    int s = d[std::uniform_int_distribution<std::size_t>(0, d.size() - 1)(rng)];
    rev.push_back(s);
    w = w.times_simple(s);
  }
  return {rev.rbegin(), rev.rend()};
}

}  // namespace testsupport
