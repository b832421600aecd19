#include "dlcoho/pieces.hpp"

#include <algorithm>
#include <bitset>
#include <thread>
#include <unordered_set>

#include "dlcoho/error.hpp"

namespace dlcoho {

namespace {

using EltSet = std::unordered_set<WeylElt, WeylHash>;

std::vector<WeylElt> sorted(const EltSet& s) {
  std::vector<std::pair<std::vector<int>, WeylElt>> keyed;
  for (const auto& w : s) {
    auto word = w.reduced_word();
    keyed.emplace_back(std::move(word), w);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::vector<WeylElt> out;
  for (auto& [k, w] : keyed) out.push_back(std::move(w));
  return out;
}

// Support of (B u B for u in start) . B s_1 B ... B s_k B.
EltSet both_branch(EltSet cur, const std::vector<int>& word) {
  for (int s : word) {
    EltSet next;
    for (const auto& u : cur) {
      next.insert(u.times_simple(s));
      if (u.has_right_descent(s)) next.insert(u);
    }
    cur = std::move(next);
  }
  return cur;
}

void require_reduced(const WeylElt& x, NodeSet I) {
  if (!is_I_reduced(x, I))
    throw UsageError("coset representative " + x.to_string() + " is not I-reduced");
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::NonEmpty:
      return "NonEmpty";
    case Verdict::Empty:
      return "Empty";
    case Verdict::Unknown:
      return "Unknown";
  }
  return "?";
}

std::vector<WeylElt> cell_positions(const WeylElt& y, const std::vector<int>& word_of_y) {
  if (y.system().from_word(word_of_y) != y || static_cast<int>(word_of_y.size()) != y.length())
    throw UsageError("word is not a reduced word of the element");
  return sorted(both_branch({y.inverse()}, word_of_y));
}

std::vector<WeylElt> cell_positions(const WeylElt& y) {
  return cell_positions(y, y.reduced_word());
}

bool in_cell_positions(const WeylElt& y, const WeylElt& w) {
  // w in supp(By^-1B . ByB)  iff  ByB is contained in ByB . BwB.
  return both_branch({y}, w.reduced_word()).count(y) > 0;
}

std::vector<Subexpression> subexpressions(const RootSystem& rs, const std::vector<int>& word) {
  std::vector<Subexpression> out;
  std::vector<int> skipped;
  auto rec = [&](auto&& self, std::size_t j, const WeylElt& pi) -> void {
    if (j == word.size()) {
      out.push_back({pi, skipped});
      return;
    }
    int s = word[j];
    self(self, j + 1, pi.times_simple(s));
    skipped.push_back(pi(s));
    self(self, j + 1, pi);
    skipped.pop_back();
  };
  rec(rec, 0, rs.identity());
  return out;
}

std::optional<WeylElt> parabolic_sign_witness(const RootSystem& rs, NodeSet I,
                                              const std::vector<int>& roots) {
  for (int g : roots)
    if (!rs.in_parabolic_span(g, I)) throw UsageError("root outside the parabolic subsystem");
  if (roots.empty()) return rs.identity();
  // Feasible iff the additive closure contains no pair {g, -g}.
  std::bitset<256> in;
  std::vector<int> closure;
  for (int g : roots)
    if (!in[g]) {
      in[g] = true;
      closure.push_back(g);
    }
  for (std::size_t i = 0; i < closure.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      int c = rs.sum_root(closure[i], closure[j]);
      if (c >= 0 && !in[c]) {
        in[c] = true;
        closure.push_back(c);
      }
    }
  for (int g : closure)
    if (in[rs.negate(g)]) return std::nullopt;

  // Find lambda with (lambda, g) < 0 for all g (perceptron), then move it
  // into the dominant chamber of W_I; the element doing so is the witness.
  const int n = rs.rank();
  std::vector<int> lambda(n, 0);
  for (int iter = 0;; ++iter) {
    if (iter > 1000000) throw ContradictionError("sign witness search did not converge");
    bool done = true;
    for (int g : roots)
      if (rs.inner(lambda, rs.coords(g)) >= 0) {
        for (int i = 0; i < n; ++i) lambda[i] -= rs.coords(g)[i];
        done = false;
      }
    if (done) break;
  }
  WeylElt v = rs.identity();
  for (bool moved = true; moved;) {
    moved = false;
    for (int s = 0; s < n; ++s) {
      if (!contains(I, s)) continue;
      int pairing = 0;
      for (int j = 0; j < n; ++j) pairing += lambda[j] * rs.cartan()[s][j];
      if (pairing < 0) {
        lambda[s] -= pairing;
        v = v.simple_times(s);
        moved = true;
      }
    }
  }
  for (int g : roots)
    if (rs.is_positive(v(g))) throw ContradictionError("sign witness failed verification");
  return v;
}

PieceReport piece_nonempty_r1(const WeylElt& w, NodeSet I, const WeylElt& x) {
  require_reduced(x, I);
  const auto& rs = w.system();
  PieceReport rep;
  rep.method = "subexpression";
  for (const auto& sub : subexpressions(rs, w.reduced_word())) {
    if (!sub.product.is_identity()) continue;
    std::vector<int> inside;
    bool ok = true;
    for (int b : sub.skipped_roots) {
      int g = x(b);
      if (rs.in_parabolic_span(g, I))
        inside.push_back(g);
      else if (rs.is_positive(g)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (auto v = parabolic_sign_witness(rs, I, inside)) {
      WeylElt y = *v * x;
      if (!in_cell_positions(y, w)) throw ContradictionError("witness failed the direct cell test");
      rep.verdict = Verdict::NonEmpty;
      rep.witness = y;
      return rep;
    }
  }
  rep.verdict = Verdict::Empty;
  return rep;
}

PieceReport piece_nonempty_r1_enumerate(const WeylElt& w, NodeSet I, const WeylElt& x) {
  require_reduced(x, I);
  PieceReport rep;
  rep.method = "enumerate";
  auto word = w.reduced_word();
  for (const auto& v : parabolic_elements(w.system(), I)) {
    WeylElt y = v * x;
    if (both_branch({y}, word).count(y)) {
      rep.verdict = Verdict::NonEmpty;
      rep.witness = y;
      return rep;
    }
  }
  rep.verdict = Verdict::Empty;
  return rep;
}

std::vector<CosetVerdict> scan_cosets(const WeylElt& w, NodeSet I, int jobs, bool enumerate) {
  auto reps = minimal_coset_reps(w.system(), I);
  std::vector<CosetVerdict> out(reps.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < reps.size(); i += step)
      out[i] = {reps[i], enumerate ? piece_nonempty_r1_enumerate(w, I, reps[i])
                                   : piece_nonempty_r1(w, I, reps[i])};
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
    for (auto& t : pool) t.join();
  }
  return out;
}

PieceReport multi_collapse_check(const std::vector<WeylElt>& factors, NodeSet I,
                                 const std::vector<WeylElt>& xs, std::size_t exact_limit) {
  if (factors.size() != xs.size() || factors.empty())
    throw UsageError("need one coset representative per factor");
  for (const auto& x : xs) require_reduced(x, I);
  const auto& rs = factors[0].system();
  const std::size_t r = factors.size();
  PieceReport rep;
  rep.method = "link";
  for (std::size_t i = 0; i < r; ++i) {
    const WeylElt& x = xs[i];
    const WeylElt& target = xs[(i + 1) % r];
    bool linked = false;
    for (const auto& sub : subexpressions(rs, factors[i].reduced_word())) {
      if (min_coset_rep(x * sub.product, I) != target) continue;
      std::vector<int> inside;
      bool ok = true;
      for (int b : sub.skipped_roots) {
        int g = x(b);
        if (rs.in_parabolic_span(g, I))
          inside.push_back(g);
        else if (rs.is_positive(g)) {
          ok = false;
          break;
        }
      }
      if (ok && parabolic_sign_witness(rs, I, inside)) {
        linked = true;
        break;
      }
    }
    if (!linked) {
      rep.verdict = Verdict::Empty;
      rep.detail = "no cell of W_I " + x.to_string() + " reaches W_I " + target.to_string() +
                   " through factor " + std::to_string(i + 1);
      return rep;
    }
  }
  auto WI = parabolic_elements(rs, I);
  if (WI.size() <= exact_limit) {
    rep.method = "link+chain";
    std::vector<std::vector<int>> words;
    for (const auto& f : factors) words.push_back(f.reduced_word());
    for (const auto& v : WI) {
      WeylElt y1 = v * xs[0];
      EltSet cur{y1};
      for (std::size_t i = 0; i < r && !cur.empty(); ++i) {
        EltSet next;
        for (const auto& y : both_branch(cur, words[i]))
          if (min_coset_rep(y, I) == xs[(i + 1) % r]) next.insert(y);
        cur = std::move(next);
      }
      if (cur.count(y1)) {
        rep.verdict = Verdict::Unknown;
        return rep;
      }
    }
    rep.verdict = Verdict::Empty;
    rep.detail = "no cyclic chain of cells closes up";
    return rep;
  }
  rep.verdict = Verdict::Unknown;
  return rep;
}

int dim_e_term(const WeylElt& x, NodeSet I, const WeylElt& w_prime) {
  const auto& rs = x.system();
  WeylElt winv = w_prime.inverse();
  int n = 0;
  for (int k = rs.num_positive(); k < rs.num_roots(); ++k) {
    int xa = x(k);
    if (rs.is_positive(xa) && !rs.in_parabolic_span(xa, I) && rs.is_positive(winv(k))) ++n;
  }
  return n;
}

PieceDecompositionReport check_piece_decomposition(const std::vector<WeylElt>& factors, NodeSet I, const WeylElt& x,
                                const std::vector<int>& gammas) {
  if (factors.size() != gammas.size()) throw UsageError("one split hint per factor is required");
  require_reduced(x, I);
  const auto& rs = x.system();
  PieceDecompositionReport rep;
  rep.ok = true;
  rep.levi_element = rs.identity();
  int levi_len = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    FactorCheck f;
    f.w = factors[i];
    f.gamma = gammas[i];
    const std::string tag = "factor " + std::to_string(i + 1) + ": ";
    if (f.gamma >= 0) {
      if (!f.w.has_left_descent(f.gamma))
        throw UsageError(tag + rs.label(f.gamma) + " is not a left descent of " + f.w.to_string());
      f.case_tag = 'b';
      f.w_prime = f.w.simple_times(f.gamma);
      f.v = conjugate(x, f.w_prime);
      if (in_parabolic(conjugate(x, rs.simple(f.gamma)), I))
        f.failure = tag + "x gamma x^-1 lies in W_I";
      else if (!in_parabolic(f.v, I))
        f.failure = tag + "x w' x^-1 is not in W_I";
      else if (f.w_prime.length() != f.v.length())
        f.failure = tag + "length of w' differs from its conjugate";
      else
        ++rep.d;
    } else {
      f.case_tag = 'a';
      f.w_prime = f.w;
      f.v = conjugate(x, f.w);
      if (!in_parabolic(f.v, I)) f.failure = tag + "x w x^-1 is not in W_I";
    }
    f.ok = f.failure.empty();
    rep.ok &= f.ok;
    f.e_term = dim_e_term(x, I, f.w_prime);
    rep.e += f.e_term;
    rep.levi_element = rep.levi_element * f.v;
    levi_len += f.v.length();
    rep.factors.push_back(std::move(f));
  }
  rep.levi_length_additive = rep.levi_element.length() == levi_len;
  return rep;
}

std::vector<WeylElt> lower_interval(const WeylElt& w) {
  EltSet cur{w.system().identity()};
  for (int s : w.reduced_word()) {
    EltSet next = cur;
    for (const auto& u : cur) next.insert(u.times_simple(s));
    cur = std::move(next);
  }
  return sorted(cur);
}

std::vector<WeylElt> lower_interval_full_support(const WeylElt& w) {
  std::vector<WeylElt> out;
  const NodeSet all = w.system().all_nodes();
  for (auto& v : lower_interval(w))
    if (support(v) == all) out.push_back(v);
  return out;
}

}  // namespace dlcoho
