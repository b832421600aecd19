#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dlcoho/weyl.hpp"

namespace dlcoho {

enum class Verdict { NonEmpty, Empty, Unknown };
const char* verdict_name(Verdict v);

struct PieceReport {
  Verdict verdict = Verdict::Unknown;
  std::optional<WeylElt> witness;  // y in W_I x, single-factor NonEmpty only
  std::string method;
  std::string detail;
};

// S(y): every w such that X(w) meets the Bruhat cell ByB/B. Computed as the
// support of B y^-1 B . B y B, letter by letter along a reduced word of y.
std::vector<WeylElt> cell_positions(const WeylElt& y);
std::vector<WeylElt> cell_positions(const WeylElt& y, const std::vector<int>& word_of_y);

// w in S(y), decided by asking whether y survives the product ByB . BwB.
bool in_cell_positions(const WeylElt& y, const WeylElt& w);

// A subexpression of a fixed word: the resulting product and the roots
// pi_{j-1}(alpha_{s_j}) at the skipped positions j.
struct Subexpression {
  WeylElt product;
  std::vector<int> skipped_roots;
};
std::vector<Subexpression> subexpressions(const RootSystem& rs, const std::vector<int>& word);

// Is there v in W_I with v(g) negative for every root g in `roots`? On
// success returns such a v.
std::optional<WeylElt> parabolic_sign_witness(const RootSystem& rs, NodeSet I,
                                              const std::vector<int>& roots);

PieceReport piece_nonempty_r1(const WeylElt& w, NodeSet I, const WeylElt& x);
// Second route: enumerate y in W_I x and test cell membership directly.
PieceReport piece_nonempty_r1_enumerate(const WeylElt& w, NodeSet I, const WeylElt& x);

struct CosetVerdict {
  WeylElt x;
  PieceReport report;
};
std::vector<CosetVerdict> scan_cosets(const WeylElt& w, NodeSet I, int jobs = 1,
                                      bool enumerate = false);

// One-sided check for the pieces of X(w_1, ..., w_r) attached to
// (W_I x_1, ..., W_I x_r): returns Empty with a reason, or Unknown.
PieceReport multi_collapse_check(const std::vector<WeylElt>& factors, NodeSet I,
                                 const std::vector<WeylElt>& xs,
                                 std::size_t exact_limit = 50000);

struct FactorCheck {
  int gamma = -1;  // node index, -1 for gamma = 1
  char case_tag = 'a';
  WeylElt w;
  WeylElt w_prime;
  WeylElt v;
  int e_term = 0;
  bool ok = false;
  std::string failure;
};

struct PieceDecompositionReport {
  std::vector<FactorCheck> factors;
  bool ok = false;
  int d = 0;
  int e = 0;
  WeylElt levi_element;  // v_1 ... v_r
  bool levi_length_additive = false;
};

// gammas[i] is a node index or -1 for gamma_i = 1.
PieceDecompositionReport check_piece_decomposition(const std::vector<WeylElt>& factors, NodeSet I, const WeylElt& x,
                                const std::vector<int>& gammas);

// |{a in Phi^- : x(a) in Phi^+ \ Phi_I and w'^-1(a) in Phi^+}|
int dim_e_term(const WeylElt& x, NodeSet I, const WeylElt& w_prime);

std::vector<WeylElt> lower_interval(const WeylElt& w);
std::vector<WeylElt> lower_interval_full_support(const WeylElt& w);

}  // namespace dlcoho
