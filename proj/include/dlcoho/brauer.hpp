#pragma once

#include <map>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dlcoho/cohom.hpp"

namespace dlcoho {

// Eigenvalue scalar -> exponent of q modulo d, stored doubled (mod 2d) so
// that half-integral exponents such as -7/2 fit.
class UnityExponentMap {
 public:
  UnityExponentMap() = default;
  // Closes the given assignments under multiplication. Throws UsageError if
  // two products disagree.
  UnityExponentMap(int d, const std::map<Unity, int>& doubled);
  int d() const { return d_; }
  std::optional<int> doubled(Unity u) const;
  const std::map<Unity, int>& entries() const { return map_; }

 private:
  int d_ = 1;
  std::map<Unity, int> map_;
};

// j_chi = t/2-exponent of the grade plus exponent(unity), modulo d. Throws
// UsageError when a character sits in two grades, when its unity has no
// exponent, or when the sum is not integral.
std::map<std::string, int> j_invariants(const CohPoly& table, const UnityExponentMap& umap);

struct BrauerVertex {
  std::string id;
  std::string chr;  // empty for the exceptional vertex
  bool exceptional = false;
  std::optional<int> j;
  double x = 0, y = 0;
};

struct BrauerTree {
  std::string group;
  int d = 0;
  std::vector<BrauerVertex> vertices;
  std::vector<std::pair<int, int>> edges;  // vertex indices
  // Neighbours of each vertex, counterclockwise in the drawing.
  std::vector<std::vector<int>> rotation;

  int index(const std::string& id) const;  // -1 if absent
  int exceptional() const;                 // -1 if absent
};

// Vertices keep the drawing coordinates; the rotation system is read off
// them.
BrauerTree tree_from_json(const nlohmann::json& j, const std::string& where);

struct TreeReport {
  bool ok = false;
  int vertices = 0;
  int edges = 0;
  std::vector<std::string> violations;
  std::map<std::string, std::vector<std::string>> series_paths;  // series -> vertex chars in path order
};

// Tree axioms, block membership, Harish-Chandra series inducing paths, and
// distinct j labels mod d. Series are taken from the character set.
TreeReport validate_tree(const BrauerTree& tree, const std::vector<std::string>& block, const CharSet& cs);

enum class RenderFormat { Dot, Ascii };
RenderFormat parse_render_format(const std::string& s);

// Walks the tree from the exceptional vertex, visiting the neighbours of
// each vertex counterclockwise starting after the edge it was entered by.
// Throws UsageError on an invalid tree.
std::string render(const BrauerTree& tree, RenderFormat fmt);

struct LabelCheck {
  int compared = 0;
  std::vector<std::string> mismatches;
  std::vector<std::string> unlabeled;  // vertices without a figure label
};

// Compares the j labels carried by the tree against derived invariants.
LabelCheck compare_labels(const BrauerTree& tree, const std::map<std::string, int>& derived);

// A tree file together with everything it refers to (paths relative to the
// data directory).
struct TreeBundle {
  BrauerTree tree;
  CharSet charset;
  std::vector<std::string> block;
  UnityExponentMap umap;
  CohPoly table;  // the full theorem table, conditional rows included
  std::vector<std::pair<int, std::string>> unattached_labels;  // figure labels on no vertex
};

TreeBundle load_tree_bundle(const std::string& path, const std::string& data_dir);

}  // namespace dlcoho
