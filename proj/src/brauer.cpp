#include "dlcoho/brauer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "dlcoho/error.hpp"

namespace dlcoho {

using nlohmann::json;

namespace {

int mod(long long a, long long m) { return static_cast<int>(((a % m) + m) % m); }

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

UnityExponentMap::UnityExponentMap(int d, const std::map<Unity, int>& doubled) : d_(d) {
  if (d <= 0) throw UsageError("d must be positive");
  const int m = 2 * d;
  map_[Unity()] = 0;
  std::vector<Unity> queue;
  auto put = [&](Unity u, int e) {
    e = mod(e, m);
    auto [it, fresh] = map_.emplace(u, e);
    if (!fresh && it->second != e)
      throw UsageError("exponent of " + u.label() + " is both " + std::to_string(it->second) + "/2 and " +
                       std::to_string(e) + "/2 mod " + std::to_string(d));
    if (fresh) queue.push_back(u);
  };
  for (const auto& [u, e] : doubled) put(u, e);
  while (!queue.empty()) {
    Unity u = queue.back();
    queue.pop_back();
    std::vector<std::pair<Unity, int>> known(map_.begin(), map_.end());
    for (const auto& [v, e] : known) put(u * v, map_.at(u) + e);
  }
}

std::optional<int> UnityExponentMap::doubled(Unity u) const {
  auto it = map_.find(u);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, int> j_invariants(const CohPoly& table, const UnityExponentMap& umap) {
  std::map<std::string, std::pair<Grade, Unity>> seen;
  for (const auto& [g, c] : table.data())
    for (const auto& [t, m] : c) {
      if (m == 0) continue;
      auto [it, fresh] = seen.emplace(t.chr, std::make_pair(g, t.unity));
      if (!fresh && (it->second.first != g || it->second.second != t.unity))
        throw UsageError(t.chr + " occurs in more than one grade");
    }
  std::map<std::string, int> out;
  for (const auto& [chr, gu] : seen) {
    auto e = umap.doubled(gu.second);
    if (!e) throw UsageError("no exponent for the eigenvalue " + gu.second.label() + " of " + chr);
    int s = gu.first.t2 + *e;
    if (s % 2 != 0) throw UsageError("half-integral j for " + chr);
    out[chr] = mod(s / 2, umap.d());
  }
  return out;
}

int BrauerTree::index(const std::string& id) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].id == id) return static_cast<int>(i);
  return -1;
}

int BrauerTree::exceptional() const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].exceptional) return static_cast<int>(i);
  return -1;
}

BrauerTree tree_from_json(const json& j, const std::string& where) {
  BrauerTree t;
  try {
    t.group = j.at("group").get<std::string>();
    t.d = j.at("d").get<int>();
    for (const auto& v : j.at("vertices")) {
      BrauerVertex bv;
      bv.id = v.at("id").get<std::string>();
      bv.exceptional = v.value("exceptional", false);
      if (!bv.exceptional) bv.chr = v.at("char").get<std::string>();
      if (v.contains("j")) bv.j = v["j"].get<int>();
      bv.x = v.at("pos").at(0).get<double>();
      bv.y = v.at("pos").at(1).get<double>();
      if (t.index(bv.id) >= 0) throw ConfigError("duplicate vertex " + bv.id);
      t.vertices.push_back(bv);
    }
    for (const auto& e : j.at("edges")) {
      int a = t.index(e.at(0).get<std::string>()), b = t.index(e.at(1).get<std::string>());
      if (a < 0 || b < 0) throw ConfigError("edge to an unknown vertex");
      t.edges.emplace_back(a, b);
    }
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  t.rotation.assign(t.vertices.size(), {});
  for (const auto& [a, b] : t.edges) {
    t.rotation[a].push_back(b);
    t.rotation[b].push_back(a);
  }
  for (std::size_t v = 0; v < t.vertices.size(); ++v) {
    auto angle = [&](int w) {
      return std::atan2(t.vertices[w].y - t.vertices[v].y, t.vertices[w].x - t.vertices[v].x);
    };
    std::sort(t.rotation[v].begin(), t.rotation[v].end(), [&](int a, int b) { return angle(a) < angle(b); });
  }
  return t;
}

TreeReport validate_tree(const BrauerTree& tree, const std::vector<std::string>& block, const CharSet& cs) {
  TreeReport r;
  const int n = static_cast<int>(tree.vertices.size());
  r.vertices = n;
  r.edges = static_cast<int>(tree.edges.size());
  auto& bad = r.violations;

  int exc = 0;
  for (const auto& v : tree.vertices) exc += v.exceptional;
  if (exc != 1) bad.push_back(std::to_string(exc) + " exceptional vertices");
  if (r.edges != n - 1) bad.push_back(std::to_string(r.edges) + " edges on " + std::to_string(n) + " vertices");

  std::set<std::pair<int, int>> seen_edges;
  for (auto [a, b] : tree.edges) {
    if (a == b) bad.push_back("loop at " + tree.vertices[a].id);
    if (!seen_edges.insert({std::min(a, b), std::max(a, b)}).second)
      bad.push_back("repeated edge " + tree.vertices[a].id + " - " + tree.vertices[b].id);
  }

  // Connectivity; with n - 1 edges this also rules out cycles.
  if (n > 0) {
    std::vector<bool> reached(n, false);
    std::vector<int> stack = {0};
    reached[0] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : tree.rotation[v])
        if (!reached[w]) {
          reached[w] = true;
          stack.push_back(w);
        }
    }
    for (int v = 0; v < n; ++v)
      if (!reached[v]) bad.push_back("vertex " + tree.vertices[v].id + " is not connected");
  }

  std::set<std::string> in_block(block.begin(), block.end()), on_tree;
  for (const auto& v : tree.vertices) {
    if (v.exceptional) continue;
    if (!in_block.count(v.chr)) bad.push_back(v.chr + " is not in the block");
    if (!on_tree.insert(v.chr).second) bad.push_back(v.chr + " labels two vertices");
  }
  for (const auto& m : block)
    if (!on_tree.count(m)) bad.push_back(m + " has no vertex");

  // Distances from the exceptional vertex, for orienting series paths.
  std::vector<int> dist(n, n);
  if (int root = tree.exceptional(); root >= 0) {
    std::vector<int> queue = {root};
    dist[root] = 0;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (int w : tree.rotation[queue[q]])
        if (dist[w] == n) {
          dist[w] = dist[queue[q]] + 1;
          queue.push_back(w);
        }
  }

  // Each Harish-Chandra series spans a path.
  std::map<std::string, std::vector<int>> series;
  for (int v = 0; v < n; ++v)
    if (!tree.vertices[v].exceptional && cs.find(tree.vertices[v].chr))
      series[cs.support(tree.vertices[v].chr)].push_back(v);
  for (const auto& [s, members] : series) {
    std::set<int> mem(members.begin(), members.end());
    std::map<int, int> deg;
    int inner_edges = 0;
    for (auto [a, b] : tree.edges)
      if (mem.count(a) && mem.count(b)) {
        ++deg[a];
        ++deg[b];
        ++inner_edges;
      }
    bool path = inner_edges == static_cast<int>(members.size()) - 1 &&
                std::all_of(members.begin(), members.end(), [&](int v) { return deg[v] <= 2; });
    if (!path) {
      bad.push_back("series " + s + " does not induce a path");
      continue;
    }
    // Read the path from the end nearer the exceptional vertex.
    int start = -1;
    for (int v : members)
      if (deg[v] <= 1 && (start < 0 || dist[v] < dist[start])) start = v;
    std::vector<std::string> order;
    int prev = -1, cur = start;
    while (cur >= 0) {
      order.push_back(tree.vertices[cur].chr);
      int next = -1;
      for (int w : tree.rotation[cur])
        if (w != prev && mem.count(w)) next = w;
      prev = cur;
      cur = next;
    }
    r.series_paths[s] = order;
  }

  std::map<int, std::string> jv;
  for (const auto& v : tree.vertices)
    if (v.j) {
      int j = mod(*v.j, tree.d);
      auto [it, fresh] = jv.emplace(j, v.chr);
      if (!fresh) bad.push_back(v.chr + " and " + it->second + " share j = " + std::to_string(j));
    }

  r.ok = bad.empty();
  return r;
}

RenderFormat parse_render_format(const std::string& s) {
  if (s == "dot") return RenderFormat::Dot;
  if (s == "ascii") return RenderFormat::Ascii;
  throw UsageError("unknown render format '" + s + "' (dot, ascii)");
}

namespace {

std::string vertex_text(const BrauerVertex& v) {
  std::string s = v.exceptional ? "(exceptional)" : v.chr;
  if (v.j) s += " [" + std::to_string(*v.j) + "]";
  return s;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

// Neighbours of v in rotation order, starting just after `from`.
std::vector<int> children(const BrauerTree& t, int v, int from) {
  const auto& rot = t.rotation[v];
  std::vector<int> out;
  auto it = std::find(rot.begin(), rot.end(), from);
  std::size_t k = it == rot.end() ? 0 : static_cast<std::size_t>(it - rot.begin()) + 1;
  for (std::size_t i = 0; i < rot.size(); ++i) {
    int w = rot[(k + i) % rot.size()];
    if (w != from) out.push_back(w);
  }
  return out;
}

}  // namespace

std::string render(const BrauerTree& tree, RenderFormat fmt) {
  const int root = tree.exceptional();
  if (root < 0 || tree.edges.size() + 1 != tree.vertices.size())
    throw UsageError("cannot render: not a tree with an exceptional vertex");
  std::vector<bool> seen(tree.vertices.size(), false);
  std::ostringstream out;

  if (fmt == RenderFormat::Dot) {
    out << "graph \"" << tree.group << " Phi_" << tree.d << "\" {\n";
    out << "  node [shape=circle, fontsize=10];\n";
    std::vector<int> order;
    std::vector<std::pair<int, int>> edges;
    std::function<void(int, int)> walk = [&](int v, int from) {
      seen[v] = true;
      order.push_back(v);
      for (int w : children(tree, v, from)) {
        if (seen[w]) throw UsageError("cannot render: cycle through " + tree.vertices[w].id);
        edges.emplace_back(v, w);
        walk(w, v);
      }
    };
    walk(root, -1);
    if (order.size() != tree.vertices.size()) throw UsageError("cannot render: tree is not connected");
    for (int v : order) {
      const auto& bv = tree.vertices[v];
      out << "  \"" << dot_escape(bv.id) << "\" [label=\"";
      if (bv.exceptional) {
        out << "exc\", style=filled, fillcolor=black, fontcolor=white";
      } else {
        out << dot_escape(bv.chr);
        if (bv.j) out << "\\nj=" << *bv.j;
        out << "\"";
      }
      out << ", pos=\"" << bv.x << "," << bv.y << "!\"];\n";
    }
    for (auto [a, b] : edges)
      out << "  \"" << dot_escape(tree.vertices[a].id) << "\" -- \"" << dot_escape(tree.vertices[b].id) << "\";\n";
    out << "}\n";
    return out.str();
  }

  out << vertex_text(tree.vertices[root]) << "\n";
  std::function<void(int, int, const std::string&)> walk = [&](int v, int from, const std::string& prefix) {
    seen[v] = true;
    auto kids = children(tree, v, from);
    for (std::size_t i = 0; i < kids.size(); ++i) {
      int w = kids[i];
      if (seen[w]) throw UsageError("cannot render: cycle through " + tree.vertices[w].id);
      bool last = i + 1 == kids.size();
      out << prefix << (last ? "`-- " : "|-- ") << vertex_text(tree.vertices[w]) << "\n";
      walk(w, v, prefix + (last ? "    " : "|   "));
    }
  };
  walk(root, -1, "");
  if (std::count(seen.begin(), seen.end(), true) != static_cast<long>(tree.vertices.size()))
    throw UsageError("cannot render: tree is not connected");
  return out.str();
}

LabelCheck compare_labels(const BrauerTree& tree, const std::map<std::string, int>& derived) {
  LabelCheck c;
  for (const auto& v : tree.vertices) {
    if (v.exceptional) continue;
    if (!v.j) {
      c.unlabeled.push_back(v.chr);
      continue;
    }
    ++c.compared;
    auto it = derived.find(v.chr);
    if (it == derived.end()) {
      c.mismatches.push_back(v.chr + ": no derived value");
    } else if (it->second != mod(*v.j, tree.d)) {
      c.mismatches.push_back(v.chr + ": figure " + std::to_string(*v.j) + ", derived " + std::to_string(it->second));
    }
  }
  return c;
}

TreeBundle load_tree_bundle(const std::string& path, const std::string& data_dir) {
  json j = read_file(path);
  TreeBundle b;
  b.tree = tree_from_json(j, path);
  auto rel = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) throw ConfigError(path + ": missing '" + key + "'");
    return data_dir + "/" + j[key].get<std::string>();
  };
  b.charset = load_charset(rel("charset"));
  if (b.charset.group() != b.tree.group) throw ConfigError(path + ": charset group does not match the tree");
  Block blk = load_block(rel("block"), b.charset);
  b.block = blk.members;

  std::map<Unity, int> doubled;
  for (const auto& [label, e] : j.at("unity_exponents").items()) doubled[Unity::parse(label)] = e.get<int>();
  try {
    b.umap = UnityExponentMap(b.tree.d, doubled);
  } catch (const UsageError& e) {
    throw ConfigError(path + ": " + e.what());
  }

  // Theorem tables: the unconditional part plus every conditional part.
  json golden = read_file(rel("table"));
  const json& t = golden.at("table");
  b.table = parse_poly(t.at("unconditional").get<std::string>(), b.charset);
  for (const auto& part : t.value("conditional", json::array()))
    b.table = b.table + parse_poly(part.at("expr").get<std::string>(), b.charset);

  for (const auto& u : j.value("unattached_labels", json::array()))
    b.unattached_labels.emplace_back(u.at("j").get<int>(), u.value("note", ""));
  return b;
}

}  // namespace dlcoho
