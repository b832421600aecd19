#include "dlcoho/weyl.hpp"

#include <map>
#include <mutex>

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_set>

#include "dlcoho/error.hpp"

namespace dlcoho {

CoxeterType CoxeterType::parse(std::string_view name) {
  if (name.size() < 2) throw ConfigError("bad Coxeter type '" + std::string(name) + "'");
  static const std::string fams = "ABCDEFG";
  auto pos = fams.find(static_cast<char>(std::toupper(name[0])));
  if (pos == std::string::npos) throw ConfigError("unknown family in '" + std::string(name) + "'");
  int rank = 0;
  for (char c : name.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ConfigError("bad rank in '" + std::string(name) + "'");
    rank = rank * 10 + (c - '0');
  }
  return {static_cast<TypeLetter>(pos), rank};
}

std::string CoxeterType::name() const {
  return std::string(1, "ABCDEFG"[static_cast<int>(family)]) + std::to_string(rank);
}

namespace {

std::vector<std::vector<int>> cartan_matrix(const CoxeterType& t) {
  const int n = t.rank;
  auto bad = [&] { return ConfigError("unsupported Coxeter type " + t.name()); };
  if (n < 1 || n > 30) throw bad();
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) a[i][i] = 2;
  auto link = [&](int i, int j) { a[i][j] = a[j][i] = -1; };
  switch (t.family) {
    case TypeLetter::A:
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case TypeLetter::B:
    case TypeLetter::C:
      if (n < 2) throw bad();
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
      // B: alpha_n short; C: alpha_n long.
      if (t.family == TypeLetter::B) {
        a[n - 2][n - 1] = -1;
        a[n - 1][n - 2] = -2;
      } else {
        a[n - 2][n - 1] = -2;
        a[n - 1][n - 2] = -1;
      }
      break;
    case TypeLetter::D:
      if (n < 4) throw bad();
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
      link(n - 3, n - 1);
      break;
    case TypeLetter::E:
      if (n < 6 || n > 8) throw bad();
      link(0, 2);
      link(1, 3);
      for (int i = 2; i + 1 < n; ++i) link(i, i + 1);
      break;
    case TypeLetter::F:
      if (n != 4) throw bad();
      link(0, 1);
      a[1][2] = -1;  // t2 long, t3 short
      a[2][1] = -2;
      link(2, 3);
      break;
    case TypeLetter::G:
      if (n != 2) throw bad();
      a[0][1] = -3;  // t1 short
      a[1][0] = -1;
      break;
  }
  return a;
}

// (alpha_i, alpha_i) normalised so that the shortest root has value 2.
std::vector<int> symmetrizer(const std::vector<std::vector<int>>& a) {
  const int n = static_cast<int>(a.size());
  // d_i a_ij = d_j a_ji, fixed by propagation along the diagram.
  std::vector<long> num(n, 0), den(n, 1);
  num[0] = 1;
  std::deque<int> q{0};
  while (!q.empty()) {
    int i = q.front();
    q.pop_front();
    for (int j = 0; j < n; ++j) {
      if (i == j || a[i][j] == 0 || num[j] != 0) continue;
      num[j] = num[i] * a[i][j];
      den[j] = den[i] * a[j][i];
      q.push_back(j);
    }
  }
  long l = 1;
  for (int i = 0; i < n; ++i) l = std::lcm(l, den[i]);
  std::vector<long> d(n);
  for (int i = 0; i < n; ++i) d[i] = num[i] * (l / den[i]);
  long g = 0;
  for (long v : d) g = std::gcd(g, v);
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = static_cast<int>(2 * d[i] / g);
  return out;
}

}  // namespace

RootSystem::RootSystem(CoxeterType type) : type_(type), cartan_(cartan_matrix(type)) {
  const int n = type_.rank;
  sym_ = symmetrizer(cartan_);
  auto reflect = [&](const std::vector<int>& c, int i) {
    int pairing = 0;
    for (int j = 0; j < n; ++j) pairing += c[j] * cartan_[i][j];
    std::vector<int> r = c;
    r[i] -= pairing;
    return r;
  };
  std::set<std::vector<int>> seen;
  std::deque<std::vector<int>> queue;
  for (int i = 0; i < n; ++i) {
    std::vector<int> c(n, 0);
    c[i] = 1;
    seen.insert(c);
    queue.push_back(c);
  }
  while (!queue.empty()) {
    auto c = queue.front();
    queue.pop_front();
    for (int i = 0; i < n; ++i) {
      auto r = reflect(c, i);
      bool pos = std::all_of(r.begin(), r.end(), [](int v) { return v >= 0; });
      if (pos && seen.insert(r).second) queue.push_back(r);
    }
  }
  std::vector<std::vector<int>> pos(seen.begin(), seen.end());
  std::sort(pos.begin(), pos.end(), [](const auto& x, const auto& y) {
    int hx = std::accumulate(x.begin(), x.end(), 0), hy = std::accumulate(y.begin(), y.end(), 0);
    if (hx != hy) return hx < hy;
    if (hx == 1) return x > y;  // simple roots in node order
    return x < y;
  });
  n_pos_ = static_cast<int>(pos.size());
  if (2 * n_pos_ > 255) throw ConfigError("root system too large for " + type_.name());
  coords_ = pos;
  for (auto c : pos) {
    for (auto& v : c) v = -v;
    coords_.push_back(c);
  }
  for (int k = 0; k < 2 * n_pos_; ++k) lookup_.emplace_back(coords_[k], k);
  std::sort(lookup_.begin(), lookup_.end());
  simple_perm_.assign(n, std::vector<std::uint8_t>(2 * n_pos_));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 2 * n_pos_; ++k) {
      int img = find_root(reflect(coords_[k], i));
      if (img < 0) throw ConfigError("root system not closed under reflections");
      simple_perm_[i][k] = static_cast<std::uint8_t>(img);
    }
}

// One instance per type for the life of the process, so elements never
// outlive their system and elements from separate calls compare equal.
std::shared_ptr<const RootSystem> RootSystem::make(CoxeterType type) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const RootSystem>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[type.name()];
  if (!slot) slot = std::make_shared<const RootSystem>(type);
  return slot;
}

std::shared_ptr<const RootSystem> RootSystem::make(std::string_view name) {
  return make(CoxeterType::parse(name));
}

int RootSystem::height(int k) const {
  return std::accumulate(coords_[k].begin(), coords_[k].end(), 0);
}

int RootSystem::find_root(const std::vector<int>& c) const {
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(c, -1));
  if (it == lookup_.end() || it->first != c) return -1;
  return it->second;
}

int RootSystem::sum_root(int a, int b) const {
  std::vector<int> c = coords_[a];
  for (int i = 0; i < rank(); ++i) c[i] += coords_[b][i];
  return find_root(c);
}

bool RootSystem::in_parabolic_span(int k, NodeSet I) const {
  for (int i = 0; i < rank(); ++i)
    if (coords_[k][i] != 0 && !contains(I, i)) return false;
  return true;
}

int RootSystem::inner(const std::vector<int>& a, const std::vector<int>& b) const {
  // (alpha_i, alpha_j) = a_ij (alpha_i, alpha_i) / 2
  int s = 0;
  for (int i = 0; i < rank(); ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < rank(); ++j) s += a[i] * b[j] * cartan_[i][j] * sym_[i] / 2;
  }
  return s;
}

int RootSystem::parse_label(std::string_view tok) const {
  std::string_view digits = tok;
  if (!digits.empty() && (digits[0] == 't' || digits[0] == 's')) digits.remove_prefix(1);
  int v = 0;
  if (digits.empty()) throw UsageError("empty node label");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw UsageError("bad node label '" + std::string(tok) + "'");
    v = v * 10 + (c - '0');
  }
  if (v < 1 || v > rank())
    throw UsageError("node label '" + std::string(tok) + "' out of range for " + type_.name());
  return v - 1;
}

std::vector<int> RootSystem::parse_word(std::string_view text) const {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
      ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ',')
      ++j;
    if (j > i) {
      auto tok = text.substr(i, j - i);
      if (tok != "e") out.push_back(parse_label(tok));  // "e" is the identity
    }
    i = j;
  }
  return out;
}

NodeSet RootSystem::parse_set(std::string_view text) const {
  NodeSet I = 0;
  for (int s : parse_word(text)) I |= NodeSet(1) << s;
  return I;
}

std::string RootSystem::format_word(const std::vector<int>& word) const {
  if (word.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ' ';
    out += label(word[i]);
  }
  return out;
}

std::string RootSystem::format_set(NodeSet I) const {
  std::vector<int> w;
  for (int s = 0; s < rank(); ++s)
    if (contains(I, s)) w.push_back(s);
  if (w.empty()) return "";
  return format_word(w);
}

WeylElt RootSystem::identity() const {
  std::vector<std::uint8_t> p(num_roots());
  std::iota(p.begin(), p.end(), 0);
  return WeylElt(this, std::move(p));
}

WeylElt RootSystem::simple(int s) const {
  if (s < 0 || s >= rank()) throw UsageError("simple reflection index out of range");
  return WeylElt(this, simple_perm_[s]);
}

WeylElt RootSystem::from_word(const std::vector<int>& word) const {
  WeylElt w = identity();
  for (int s : word) w = w.times_simple(s);
  return w;
}

WeylElt RootSystem::longest_element(NodeSet I) const {
  WeylElt w = identity();
  bool grew = true;
  while (grew) {
    grew = false;
    for (int s = 0; s < rank(); ++s)
      if (contains(I, s) && !w.has_right_descent(s)) {
        w = w.times_simple(s);
        grew = true;
      }
  }
  return w;
}

std::vector<int> RootSystem::degrees() const {
  const int n = rank();
  std::vector<int> d;
  switch (type_.family) {
    case TypeLetter::A:
      for (int i = 2; i <= n + 1; ++i) d.push_back(i);
      break;
    case TypeLetter::B:
    case TypeLetter::C:
      for (int i = 1; i <= n; ++i) d.push_back(2 * i);
      break;
    case TypeLetter::D:
      for (int i = 1; i < n; ++i) d.push_back(2 * i);
      d.push_back(n);
      std::sort(d.begin(), d.end());
      break;
    case TypeLetter::E:
      if (n == 6) d = {2, 5, 6, 8, 9, 12};
      if (n == 7) d = {2, 6, 8, 10, 12, 14, 18};
      if (n == 8) d = {2, 8, 12, 14, 18, 20, 24, 30};
      break;
    case TypeLetter::F:
      d = {2, 6, 8, 12};
      break;
    case TypeLetter::G:
      d = {2, 6};
      break;
  }
  return d;
}

std::vector<int> RootSystem::regular_numbers() const {
  auto deg = degrees();
  int top = *std::max_element(deg.begin(), deg.end());
  std::vector<int> out;
  for (int m = 1; m <= top; ++m)
    if (std::any_of(deg.begin(), deg.end(), [m](int x) { return x % m == 0; })) out.push_back(m);
  return out;
}

// ---------------------------------------------------------------- WeylElt

int WeylElt::length() const {
  const int n = rs_->n_pos_;
  int l = 0;
  for (int k = 0; k < n; ++k) l += perm_[k] >= n;
  return l;
}

bool WeylElt::has_right_descent(int s) const { return perm_[s] >= rs_->n_pos_; }

bool WeylElt::has_left_descent(int s) const {
  // w^-1(alpha_s) < 0  iff  alpha_s = w(beta) for some negative beta.
  const int n = rs_->n_pos_;
  for (int k = n; k < 2 * n; ++k)
    if (perm_[k] == s) return true;
  return false;
}

NodeSet WeylElt::right_descents() const {
  NodeSet d = 0;
  for (int s = 0; s < rs_->rank(); ++s)
    if (has_right_descent(s)) d |= NodeSet(1) << s;
  return d;
}

NodeSet WeylElt::left_descents() const {
  const int n = rs_->n_pos_, r = rs_->rank();
  NodeSet d = 0;
  for (int k = n; k < 2 * n; ++k)
    if (perm_[k] < r) d |= NodeSet(1) << perm_[k];
  return d;
}

bool WeylElt::is_identity() const {
  for (std::size_t k = 0; k < perm_.size(); ++k)
    if (perm_[k] != k) return false;
  return true;
}

WeylElt WeylElt::inverse() const {
  std::vector<std::uint8_t> p(perm_.size());
  for (std::size_t k = 0; k < perm_.size(); ++k) p[perm_[k]] = static_cast<std::uint8_t>(k);
  return WeylElt(rs_, std::move(p));
}

WeylElt WeylElt::operator*(const WeylElt& o) const {
  if (rs_ != o.rs_) throw UsageError("multiplying elements of different root systems");
  std::vector<std::uint8_t> p(perm_.size());
  for (std::size_t k = 0; k < perm_.size(); ++k) p[k] = perm_[o.perm_[k]];
  return WeylElt(rs_, std::move(p));
}

WeylElt WeylElt::times_simple(int s) const {
  const auto& sp = rs_->simple_perm_.at(s);
  std::vector<std::uint8_t> p(perm_.size());
  for (std::size_t k = 0; k < perm_.size(); ++k) p[k] = perm_[sp[k]];
  return WeylElt(rs_, std::move(p));
}

WeylElt WeylElt::simple_times(int s) const {
  const auto& sp = rs_->simple_perm_.at(s);
  std::vector<std::uint8_t> p(perm_.size());
  for (std::size_t k = 0; k < perm_.size(); ++k) p[k] = sp[perm_[k]];
  return WeylElt(rs_, std::move(p));
}

std::vector<int> WeylElt::reduced_word() const {
  std::vector<int> word;
  WeylElt w = *this;
  while (true) {
    NodeSet d = w.left_descents();
    if (!d) break;
    int s = __builtin_ctz(d);
    word.push_back(s);
    w = w.simple_times(s);
  }
  return word;
}

std::string WeylElt::to_string() const { return rs_->format_word(reduced_word()); }

std::size_t WeylHash::operator()(const WeylElt& w) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto b : w.perm()) h = (h ^ b) * 1099511628211ull;
  return h;
}

// ------------------------------------------------------------ algorithms

bool bruhat_leq(const WeylElt& v0, const WeylElt& w0) {
  if (v0.system_ptr() != w0.system_ptr()) throw UsageError("Bruhat comparison across systems");
  WeylElt v = v0, w = w0;
  while (true) {
    if (v.length() > w.length()) return false;
    NodeSet d = w.left_descents();
    if (!d) return v.is_identity();
    int s = __builtin_ctz(d);
    if (v.has_left_descent(s)) v = v.simple_times(s);
    w = w.simple_times(s);
  }
}

WeylElt min_coset_rep(const WeylElt& w0, NodeSet I) {
  WeylElt w = w0;
  while (NodeSet d = w.left_descents() & I) w = w.simple_times(__builtin_ctz(d));
  return w;
}

bool is_I_reduced(const WeylElt& x, NodeSet I) { return (x.left_descents() & I) == 0; }

bool coset_equal(const WeylElt& a, const WeylElt& b, NodeSet I) {
  return min_coset_rep(a, I) == min_coset_rep(b, I);
}

WeylElt conjugate(const WeylElt& y, const WeylElt& w) { return y * w * y.inverse(); }

bool in_parabolic(const WeylElt& w, NodeSet I) { return min_coset_rep(w, I).is_identity(); }

WeylElt demazure_product(const WeylElt& u0, const WeylElt& v) {
  WeylElt u = u0;
  for (int s : v.reduced_word())
    if (!u.has_right_descent(s)) u = u.times_simple(s);
  return u;
}

int element_order(const WeylElt& w) {
  WeylElt p = w;
  int n = 1;
  while (!p.is_identity()) {
    p = p * w;
    ++n;
  }
  return n;
}

NodeSet support(const WeylElt& w) {
  NodeSet I = 0;
  for (int s : w.reduced_word()) I |= NodeSet(1) << s;
  return I;
}

std::vector<WeylElt> parabolic_elements(const RootSystem& rs, NodeSet I) {
  std::vector<WeylElt> out{rs.identity()};
  std::unordered_set<WeylElt, WeylHash> seen{rs.identity()};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (int s = 0; s < rs.rank(); ++s) {
      if (!contains(I, s)) continue;
      WeylElt n = out[i].times_simple(s);
      if (seen.insert(n).second) out.push_back(n);
    }
  return out;
}

std::vector<WeylElt> minimal_coset_reps(const RootSystem& rs, NodeSet I) {
  // Prefixes of minimal representatives are minimal representatives, so a
  // breadth-first search by right multiplication reaches all of them.
  std::vector<WeylElt> out{rs.identity()};
  std::unordered_set<WeylElt, WeylHash> seen{rs.identity()};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (int s = 0; s < rs.rank(); ++s) {
      if (out[i].has_right_descent(s)) continue;
      WeylElt n = out[i].times_simple(s);
      if (is_I_reduced(n, I) && seen.insert(n).second) out.push_back(n);
    }
  std::stable_sort(out.begin(), out.end(), [](const WeylElt& a, const WeylElt& b) {
    int la = a.length(), lb = b.length();
    if (la != lb) return la < lb;
    return a.reduced_word() < b.reduced_word();
  });
  return out;
}

std::vector<WeylElt> all_elements(const RootSystem& rs) {
  return parabolic_elements(rs, rs.all_nodes());
}

}  // namespace dlcoho
