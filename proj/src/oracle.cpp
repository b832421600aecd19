#include "dlcoho/oracle.hpp"

#include <algorithm>

#include "dlcoho/error.hpp"
#include "dlcoho/pieces.hpp"

namespace dlcoho {

namespace {

using Poly = std::vector<int>;  // coefficients, low degree first

Poly trim(Poly a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

// Remainder of a modulo a monic b over GF(p).
Poly poly_mod(Poly a, const Poly& b, int p) {
  a = trim(a);
  const int db = static_cast<int>(b.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= db) {
    int c = a.back();
    int shift = static_cast<int>(a.size()) - 1 - db;
    for (int i = 0; i <= db; ++i) a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
    a = trim(a);
  }
  return a;
}

Poly digits(int a, int p, int k) {
  Poly d(k);
  for (int i = 0; i < k; ++i, a /= p) d[i] = a % p;
  return d;
}

int undigits(const Poly& d, int p) {
  int a = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) a = a * p + d[i];
  return a;
}

bool irreducible(const Poly& f, int p) {
  const int deg = static_cast<int>(f.size()) - 1;
  for (int d = 1; 2 * d <= deg; ++d) {
    int count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (int c = 0; c < count; ++c) {
      Poly g = digits(c, p, d);
      g.push_back(1);
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

SmallField::SmallField(int p, int k) : p_(p), k_(k) {
  if (!is_prime(p) || k < 1) throw UsageError("field order must be a prime power");
  if (ipow(p, k) > 256) throw UsageError("field order above 256");
  q_ = static_cast<int>(ipow(p, k));
  Poly modulus;
  for (int c = 0; c < q_; ++c) {
    Poly f = digits(c, p, k);
    f.push_back(1);
    if (irreducible(f, p)) {
      modulus = f;
      break;
    }
  }
  add_.resize(q_ * q_);
  mul_.resize(q_ * q_);
  neg_.resize(q_);
  inv_.assign(q_, 0);
  for (int a = 0; a < q_; ++a) {
    Poly da = digits(a, p, k);
    Poly na(k);
    for (int i = 0; i < k; ++i) na[i] = (p - da[i]) % p;
    neg_[a] = static_cast<std::uint8_t>(undigits(na, p));
    for (int b = 0; b < q_; ++b) {
      Poly db = digits(b, p, k), s(k), prod(2 * k, 0);
      for (int i = 0; i < k; ++i) s[i] = (da[i] + db[i]) % p;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
      Poly r = poly_mod(prod, modulus, p);
      r.resize(k, 0);
      add_[a * q_ + b] = static_cast<std::uint8_t>(undigits(s, p));
      mul_[a * q_ + b] = static_cast<std::uint8_t>(undigits(r, p));
    }
  }
  for (int a = 1; a < q_; ++a)
    for (int b = 1; b < q_; ++b)
      if (mul_[a * q_ + b] == 1) inv_[a] = static_cast<std::uint8_t>(b);
}

SmallField SmallField::of_order(int q) {
  for (int p = 2; p <= q; ++p) {
    if (!is_prime(p) || q % p != 0) continue;
    int k = 0, r = q;
    while (r % p == 0) {
      r /= p;
      ++k;
    }
    if (r != 1) break;
    return SmallField(p, k);
  }
  throw UsageError(std::to_string(q) + " is not a prime power");
}

std::uint8_t SmallField::inv(std::uint8_t a) const {
  if (a == 0) throw UsageError("inverse of zero");
  return inv_[a];
}

std::uint8_t SmallField::pow(std::uint8_t a, long long e) const {
  std::uint8_t r = 1;
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint8_t SmallField::frobenius(std::uint8_t a, int r) const { return pow(a, ipow(p_, r)); }

Flag canonical_flag(const SmallField& f, int n, std::vector<std::uint8_t> cols) {
  if (static_cast<int>(cols.size()) != n * n) throw UsageError("flag needs n*n entries");
  std::vector<int> piv;
  for (int j = 0; j < n; ++j) {
    std::uint8_t* v = &cols[j * n];
    for (int i = 0; i < j; ++i) {
      std::uint8_t c = v[piv[i]];
      if (c == 0) continue;
      const std::uint8_t* u = &cols[i * n];
      for (int r = 0; r < n; ++r) v[r] = f.sub(v[r], f.mul(c, u[r]));
    }
    int last = -1;
    for (int r = 0; r < n; ++r)
      if (v[r] != 0) last = r;
    if (last < 0) throw UsageError("columns do not form a basis");
    std::uint8_t s = f.inv(v[last]);
    for (int r = 0; r < n; ++r) v[r] = f.mul(s, v[r]);
    piv.push_back(last);
  }
  return Flag{n, std::move(cols)};
}

Flag standard_flag(int n) {
  Flag fl{n, std::vector<std::uint8_t>(n * n, 0)};
  for (int i = 0; i < n; ++i) fl.m[i * n + i] = 1;
  return fl;
}

long long flag_count(int n, long long q) {
  long long total = 1;
  for (int i = 1; i <= n; ++i) {
    long long s = 0, pw = 1;
    for (int k = 0; k < i; ++k, pw *= q) s += pw;
    total *= s;
    if (total > (1LL << 60) / (q + 1)) return 1LL << 60;
  }
  return total;
}

void enumerate_flags(int n, const SmallField& f, const std::function<void(const Flag&)>& visit, long long guard) {
  if (flag_count(n, f.size()) > guard)
    throw ResourceError("flag count over GF(" + std::to_string(f.size()) + ")^" + std::to_string(n) +
                        " exceeds the guard");
  Flag fl{n, std::vector<std::uint8_t>(n * n, 0)};
  std::vector<bool> used(n, false);
  std::function<void(int)> column = [&](int j) {
    if (j == n) {
      visit(fl);
      return;
    }
    std::uint8_t* v = &fl.m[j * n];
    for (int piv = 0; piv < n; ++piv) {
      if (used[piv]) continue;
      std::vector<int> free;
      for (int r = 0; r < piv; ++r)
        if (!used[r]) free.push_back(r);
      std::fill(v, v + n, 0);
      v[piv] = 1;
      used[piv] = true;
      // Odometer over the free entries.
      std::vector<int> digit(free.size(), 0);
      while (true) {
        for (std::size_t k = 0; k < free.size(); ++k) v[free[k]] = static_cast<std::uint8_t>(digit[k]);
        column(j + 1);
        std::size_t k = 0;
        while (k < digit.size() && ++digit[k] == f.size()) digit[k++] = 0;
        if (k == digit.size()) break;
      }
      used[piv] = false;
    }
    std::fill(v, v + n, 0);
  };
  column(0);
}

namespace {

std::vector<int> pivots(const Flag& p) {
  std::vector<int> w(p.n);
  for (int j = 0; j < p.n; ++j)
    for (int r = 0; r < p.n; ++r)
      if (p.at(r, j) != 0) w[j] = r;
  return w;
}

// Column-major inverse by Gauss-Jordan elimination.
std::vector<std::uint8_t> inverse(const SmallField& f, int n, const std::vector<std::uint8_t>& m) {
  std::vector<std::uint8_t> a(m), b(n * n, 0);
  auto A = [&](int i, int j) -> std::uint8_t& { return a[j * n + i]; };
  auto B = [&](int i, int j) -> std::uint8_t& { return b[j * n + i]; };
  for (int i = 0; i < n; ++i) B(i, i) = 1;
  for (int c = 0; c < n; ++c) {
    int r = c;
    while (r < n && A(r, c) == 0) ++r;
    if (r == n) throw UsageError("singular matrix");
    for (int j = 0; j < n; ++j) {
      std::swap(A(r, j), A(c, j));
      std::swap(B(r, j), B(c, j));
    }
    std::uint8_t s = f.inv(A(c, c));
    for (int j = 0; j < n; ++j) {
      A(c, j) = f.mul(s, A(c, j));
      B(c, j) = f.mul(s, B(c, j));
    }
    for (int i = 0; i < n; ++i) {
      if (i == c || A(i, c) == 0) continue;
      std::uint8_t t = A(i, c);
      for (int j = 0; j < n; ++j) {
        A(i, j) = f.sub(A(i, j), f.mul(t, A(c, j)));
        B(i, j) = f.sub(B(i, j), f.mul(t, B(c, j)));
      }
    }
  }
  return b;
}

}  // namespace

std::vector<int> relative_position_perm(const SmallField& f, const Flag& p, const Flag& r) {
  if (p.n != r.n) throw UsageError("flags in different spaces");
  const int n = p.n;
  auto pinv = inverse(f, n, p.m);
  std::vector<std::uint8_t> prod(n * n, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      std::uint8_t s = 0;
      for (int k = 0; k < n; ++k) s = f.add(s, f.mul(pinv[k * n + i], r.m[j * n + k]));
      prod[j * n + i] = s;
    }
  return pivots(canonical_flag(f, n, std::move(prod)));
}

WeylElt perm_to_weyl(const RootSystem& an, const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  if (an.type().family != TypeLetter::A || an.rank() != n - 1) throw UsageError("permutation size does not match A_{n-1}");
  // e_a - e_b as an index into the root list.
  auto root = [&](int a, int b) {
    std::vector<int> c(n - 1, 0);
    for (int i = std::min(a, b); i < std::max(a, b); ++i) c[i] = a < b ? 1 : -1;
    return an.find_root(c);
  };
  std::vector<int> w = perm, word;
  for (bool moved = true; moved;) {
    moved = false;
    for (int i = 0; i + 1 < n; ++i)
      if (w[i] > w[i + 1]) {
        std::swap(w[i], w[i + 1]);
        word.push_back(i);
        moved = true;
      }
  }
  auto matches = [&](const WeylElt& e) {
    for (int i = 0; i + 1 < n; ++i)
      if (e(root(i, i + 1)) != root(perm[i], perm[i + 1])) return false;
    return true;
  };
  std::vector<int> rev(word.rbegin(), word.rend());
  for (const auto& cand : {rev, word}) {
    WeylElt e = an.from_word(cand);
    if (matches(e)) return e;
  }
  throw ContradictionError("no Weyl element acts on roots as the permutation");
}

WeylElt relative_position(const RootSystem& an, const SmallField& f, const Flag& p, const Flag& r) {
  return perm_to_weyl(an, relative_position_perm(f, p, r));
}

Flag frobenius(const SmallField& f, const Flag& p, int q) {
  std::vector<std::uint8_t> m(p.m);
  for (auto& a : m) a = f.pow(a, q);
  return canonical_flag(f, p.n, std::move(m));
}

namespace {

int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

int lehmer_index(const int* perm, int n) {
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j) smaller += perm[j] < perm[i];
    idx = idx * (n - i) + smaller;
  }
  return idx;
}

std::vector<int> lehmer_perm(int idx, int n) {
  std::vector<int> digits(n), perm(n), pool(n);
  for (int i = n - 1; i >= 0; --i) {
    digits[i] = idx % (n - i);
    idx /= n - i;
  }
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < n; ++i) {
    perm[i] = pool[digits[i]];
    pool.erase(pool.begin() + digits[i]);
  }
  return perm;
}

}  // namespace

PointTable tabulate_points(const RootSystem& an, int q, int m, long long guard) {
  const int n = an.rank() + 1;
  if (n > 6) throw UsageError("point tables are limited to n <= 6");
  long long big_q = ipow(q, m);
  if (big_q > 256) throw ResourceError("GF(" + std::to_string(big_q) + ") is beyond the field tables");
  if (flag_count(n, big_q) > guard)
    throw ResourceError("flag count over GF(" + std::to_string(big_q) + ")^" + std::to_string(n) + " exceeds the guard");
  SmallField f = SmallField::of_order(static_cast<int>(big_q));
  if (f.p() != SmallField::of_order(q).p()) throw UsageError("q and q^m differ in characteristic");
  std::vector<std::uint8_t> frob(f.size());
  for (int a = 0; a < f.size(); ++a) frob[a] = f.pow(static_cast<std::uint8_t>(a), q);
  const int nf = factorial(n);
  std::vector<long long> raw(static_cast<std::size_t>(nf) * nf, 0);
  PointTable t{n, q, m, {}, 0};
  enumerate_flags(n, f, [&](const Flag& p) {
    ++t.flags;
    int piv[6], rel[6];
    std::uint8_t x[36];
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < n; ++r)
        if (p.m[j * n + r]) piv[j] = r;
    // Rows of p reordered by pivot form a unit lower triangular matrix, so
    // p^-1 F(p) comes out of forward substitution.
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        std::uint8_t s = frob[p.m[j * n + piv[i]]];
        for (int k = 0; k < i; ++k) s = f.sub(s, f.mul(p.m[k * n + piv[i]], x[j * n + k]));
        x[j * n + i] = s;
      }
    for (int j = 0; j < n; ++j) {
      std::uint8_t* v = &x[j * n];
      for (int i = 0; i < j; ++i) {
        std::uint8_t c = v[rel[i]];
        if (!c) continue;
        const std::uint8_t* u = &x[i * n];
        for (int r = 0; r < n; ++r) v[r] = f.sub(v[r], f.mul(c, u[r]));
      }
      int last = 0;
      for (int r = 0; r < n; ++r)
        if (v[r]) last = r;
      std::uint8_t s = f.inv(v[last]);
      for (int r = 0; r < n; ++r) v[r] = f.mul(s, v[r]);
      rel[j] = last;
    }
    ++raw[static_cast<std::size_t>(lehmer_index(piv, n)) * nf + lehmer_index(rel, n)];
  }, guard);
  for (int a = 0; a < nf; ++a)
    for (int b = 0; b < nf; ++b)
      if (long long c = raw[static_cast<std::size_t>(a) * nf + b])
        t.counts[{perm_to_weyl(an, lehmer_perm(a, n)), perm_to_weyl(an, lehmer_perm(b, n))}] = c;
  return t;
}

long long piece_points(const PointTable& t, const WeylElt& w, NodeSet I, const WeylElt& x) {
  long long total = 0;
  for (const auto& v : parabolic_elements(x.system(), I)) {
    auto it = t.counts.find({v * x, w});
    if (it != t.counts.end()) total += it->second;
  }
  return total;
}

long long dl_piece_points(const WeylElt& w, NodeSet I, const WeylElt& x, int q, int m, long long guard) {
  return piece_points(tabulate_points(w.system(), q, m, guard), w, I, x);
}

CrossReport cross_validate(int n, int q, int max_m, long long guard) {
  if (n < 2) throw UsageError("need n >= 2");
  auto an = RootSystem::make("A" + std::to_string(n - 1));
  CrossReport rep;
  rep.n = n;
  rep.q = q;
  std::map<int, PointTable> tables;
  for (int m = 1; m <= max_m; ++m) {
    long long big_q = ipow(q, m);
    if (big_q > 256 || flag_count(n, big_q) > guard) {
      rep.degrees_skipped.push_back(m);
      continue;
    }
    tables.emplace(m, tabulate_points(*an, q, m, guard));
    rep.degrees_run.push_back(m);
  }
  auto elements = all_elements(*an);
  for (NodeSet I = 0; I <= an->all_nodes(); ++I)
    for (const auto& x : minimal_coset_reps(*an, I))
      for (const auto& w : elements) {
        CrossCase c{w, I, x, piece_nonempty_r1(w, I, x).verdict == Verdict::NonEmpty, {}};
        long long any = 0;
        for (const auto& [m, t] : tables) any += c.points[m] = piece_points(t, w, I, x);
        ++rep.cases;
        if (!c.predicted_nonempty && any > 0) rep.hard.push_back(c);
        if (c.predicted_nonempty && any == 0) rep.flagged.push_back(c);
      }
  return rep;
}

}  // namespace dlcoho
