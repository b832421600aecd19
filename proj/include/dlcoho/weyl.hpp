#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace dlcoho {

enum class TypeLetter { A, B, C, D, E, F, G };

struct CoxeterType {
  TypeLetter family;
  int rank;

  // Parses "F4", "E6", "A3", ...
  static CoxeterType parse(std::string_view name);
  std::string name() const;
  bool operator==(const CoxeterType&) const = default;
};

// Bit set over simple reflections (rank <= 8 everywhere we care about, but
// 32 bits leaves room for larger classical types).
using NodeSet = std::uint32_t;

class RootSystem;

class WeylElt {
 public:
  WeylElt() = default;

  const RootSystem& system() const { return *rs_; }
  const RootSystem* system_ptr() const { return rs_; }

  // Image of root index k (indices >= N are the negatives).
  int operator()(int k) const { return perm_[k]; }
  const std::vector<std::uint8_t>& perm() const { return perm_; }

  int length() const;
  NodeSet left_descents() const;
  NodeSet right_descents() const;
  bool has_left_descent(int s) const;
  bool has_right_descent(int s) const;
  bool is_identity() const;

  WeylElt inverse() const;
  WeylElt operator*(const WeylElt& o) const;
  WeylElt times_simple(int s) const;  // w * s
  WeylElt simple_times(int s) const;  // s * w

  // Lexicographically least reduced word (0-based node indices).
  std::vector<int> reduced_word() const;
  std::string to_string() const;  // "t1 t2 t3", "1" for the identity

  bool operator==(const WeylElt& o) const { return rs_ == o.rs_ && perm_ == o.perm_; }
  bool operator<(const WeylElt& o) const { return perm_ < o.perm_; }

 private:
  friend class RootSystem;
  WeylElt(const RootSystem* rs, std::vector<std::uint8_t> perm) : rs_(rs), perm_(std::move(perm)) {}
  const RootSystem* rs_ = nullptr;
  std::vector<std::uint8_t> perm_;
};

struct WeylHash {
  std::size_t operator()(const WeylElt& w) const noexcept;
};

// Roots are stored as integer coordinates in the simple-root basis. Indices
// 0..N-1 are the positive roots (simple roots first, then by height, ties by
// lexicographic coordinates); index k+N is the negative of root k.
// WeylElt values keep a raw pointer to their RootSystem, so the system must
// outlive every element built from it.
class RootSystem {
 public:
  explicit RootSystem(CoxeterType type);
  static std::shared_ptr<const RootSystem> make(CoxeterType type);
  static std::shared_ptr<const RootSystem> make(std::string_view name);

  const CoxeterType& type() const { return type_; }
  int rank() const { return type_.rank; }
  int num_positive() const { return n_pos_; }
  int num_roots() const { return 2 * n_pos_; }
  const std::vector<std::vector<int>>& cartan() const { return cartan_; }

  const std::vector<int>& coords(int k) const { return coords_[k]; }
  int height(int k) const;
  bool is_positive(int k) const { return k < n_pos_; }
  int negate(int k) const { return k < n_pos_ ? k + n_pos_ : k - n_pos_; }
  int find_root(const std::vector<int>& c) const;  // -1 if not a root
  int sum_root(int a, int b) const;                // index of a+b or -1
  bool in_parabolic_span(int k, NodeSet I) const;  // root lies in Phi_I
  // Symmetric invariant form on the root lattice (integer valued).
  int inner(const std::vector<int>& a, const std::vector<int>& b) const;

  // Node labels "t1".."tn" in Bourbaki numbering.
  std::string label(int s) const { return "t" + std::to_string(s + 1); }
  int parse_label(std::string_view tok) const;
  std::vector<int> parse_word(std::string_view text) const;
  NodeSet parse_set(std::string_view text) const;
  std::string format_word(const std::vector<int>& word) const;
  std::string format_set(NodeSet I) const;
  NodeSet all_nodes() const { return (NodeSet(1) << rank()) - 1; }

  WeylElt identity() const;
  WeylElt simple(int s) const;
  WeylElt from_word(const std::vector<int>& word) const;
  WeylElt parse_element(std::string_view text) const { return from_word(parse_word(text)); }

  WeylElt longest_element(NodeSet I) const;
  WeylElt longest_element() const { return longest_element(all_nodes()); }

  std::vector<int> degrees() const;
  std::vector<int> regular_numbers() const;

 private:
  friend class WeylElt;
  CoxeterType type_;
  int n_pos_ = 0;
  std::vector<std::vector<int>> cartan_;  // a_ij = <alpha_i^vee, alpha_j>
  std::vector<int> sym_;                  // (alpha_i, alpha_i) up to a common factor
  std::vector<std::vector<int>> coords_;  // all 2N roots
  std::vector<std::vector<std::uint8_t>> simple_perm_;
  std::vector<std::pair<std::vector<int>, int>> lookup_;  // sorted coords -> index
};

bool bruhat_leq(const WeylElt& v, const WeylElt& w);
WeylElt min_coset_rep(const WeylElt& w, NodeSet I);  // minimal element of W_I w
bool is_I_reduced(const WeylElt& x, NodeSet I);
bool coset_equal(const WeylElt& a, const WeylElt& b, NodeSet I);
WeylElt conjugate(const WeylElt& y, const WeylElt& w);  // y w y^-1
bool in_parabolic(const WeylElt& w, NodeSet I);
WeylElt demazure_product(const WeylElt& u, const WeylElt& v);
int element_order(const WeylElt& w);
NodeSet support(const WeylElt& w);

// Every element of W_I, breadth first from the identity.
std::vector<WeylElt> parabolic_elements(const RootSystem& rs, NodeSet I);
// Minimal representatives of the cosets W_I \ W, ordered by length then
// by reduced word.
std::vector<WeylElt> minimal_coset_reps(const RootSystem& rs, NodeSet I);
// Every element of W (small groups only).
std::vector<WeylElt> all_elements(const RootSystem& rs);

inline int popcount(NodeSet I) { return __builtin_popcount(I); }
inline bool contains(NodeSet I, int s) { return (I >> s) & 1u; }

}  // namespace dlcoho
