#include "dlcoho/sequences.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "dlcoho/error.hpp"

namespace dlcoho {

namespace {

constexpr std::size_t kMaxSolutions = 1000000;

}  // namespace

Feasibility feasible_dims(const std::vector<std::optional<long long>>& seq) {
  Feasibility out;
  const std::size_t k = seq.size();
  long long known_sum = 0;
  for (const auto& a : seq)
    if (a) {
      if (*a < 0) return out;
      known_sum += *a;
    }
  std::vector<long long> vals(k), ranks(k);
  std::function<bool(std::size_t, long long)> dfs = [&](std::size_t i, long long r_prev) {
    if (i == k) return r_prev == 0;
    if (seq[i]) {
      long long r = *seq[i] - r_prev;
      if (r < 0) return false;
      vals[i] = *seq[i];
      ranks[i] = r;
      return dfs(i + 1, r);
    }
    long long bound = i + 1 == k ? 0 : seq[i + 1] ? *seq[i + 1] : known_sum;
    for (long long r = 0; r <= bound; ++r) {
      vals[i] = r_prev + r;
      ranks[i] = r;
      if (dfs(i + 1, r)) return true;
    }
    return false;
  };
  if (dfs(0, 0)) {
    out.feasible = true;
    out.values = vals;
    out.ranks = ranks;
  }
  return out;
}

std::string slice_name(const SliceKey& k) {
  std::string s = k.chr + "@" + k.unity.label() + " t";
  s += k.t2 % 2 ? "^" + std::to_string(k.t2) + "/2" : "^" + std::to_string(k.t2 / 2);
  return s;
}

Family family_of(const CohPoly& p) {
  std::map<SliceKey, Profile> acc;
  for (const auto& [g, c] : p.data())
    for (const auto& [t, m] : c) acc[{t.chr, t.unity, g.t2}][g.h] += m;
  Family f;
  for (auto& [k, prof] : acc) f[k] = {prof};
  return f;
}

CohPoly poly_of(const Family& f, const std::string& group) {
  CohPoly p(group);
  for (const auto& [k, cands] : f) {
    if (cands.size() != 1) throw UsageError("slice " + slice_name(k) + " has several candidates");
    for (const auto& [h, m] : cands[0]) p.add_term({h, k.t2}, {k.chr, k.unity}, m);
  }
  return p;
}

const char* obj_name(Obj o) {
  switch (o) {
    case Obj::Open: return "open";
    case Obj::Total: return "total";
    case Obj::Closed: return "closed";
  }
  return "?";
}

Obj parse_obj(const std::string& s) {
  if (s == "open") return Obj::Open;
  if (s == "total") return Obj::Total;
  if (s == "closed") return Obj::Closed;
  throw ConfigError("unknown triangle object '" + s + "'");
}

namespace {

bool rule_applies(const Rule& r, const SliceKey& k, const CharSet& cs) {
  if (r.chr.empty()) return true;
  if (r.chr == "@coxeter") {
    const CharInfo* ci = cs.find(k.chr);
    return ci && ci->coxeter;
  }
  return r.chr == k.chr;
}

bool allowed(const std::vector<const Rule*>& rules, Obj o, const SliceKey& k, int h) {
  for (const Rule* r : rules) {
    if (r->object != o) continue;
    Grade g{h, k.t2};
    switch (r->kind) {
      case RuleKind::VanishWindow:
        if (h < r->lo || h > r->hi) return false;
        break;
      case RuleKind::PlacementAllow:
        if (std::find(r->cells.begin(), r->cells.end(), g) == r->cells.end()) return false;
        break;
      case RuleKind::EigenvalueExclude:
        if (std::find(r->cells.begin(), r->cells.end(), g) != r->cells.end()) return false;
        break;
      case RuleKind::EulerFixed:
        break;
    }
  }
  return true;
}

bool euler_ok(const std::vector<const Rule*>& rules, Obj o, const SliceKey& k, const Profile& p) {
  for (const Rule* r : rules) {
    if (r->object != o || r->kind != RuleKind::EulerFixed || r->t2 != k.t2) continue;
    long long s = 0;
    for (const auto& [h, m] : p) s += h % 2 ? -m : m;
    if (s != r->value) return false;
  }
  return true;
}

SliceOutcome solve_slice(const SliceKey& key, const std::array<const std::vector<Profile>*, 3>& cands,
                         std::optional<Obj> unknown, const std::vector<const Rule*>& rules) {
  SliceOutcome out{key, {}, false};
  int lo = -1, hi = -1;
  for (const auto* c : cands) {
    if (!c) continue;
    for (const auto& prof : *c)
      for (const auto& [h, m] : prof) {
        if (m == 0) continue;
        lo = lo < 0 ? h : std::min(lo, h);
        hi = std::max(hi, h);
      }
  }
  if (lo < 0) return out;  // nothing known is nonzero: the unknown vanishes too
  lo = std::max(0, lo - 1);
  hi = hi + 1;

  std::size_t combos = 1;
  for (const auto* c : cands)
    if (c) combos *= std::max<std::size_t>(1, c->size());

  for (std::size_t n = 0; n < combos && !out.truncated; ++n) {
    std::array<Profile, 3> fixed;
    std::size_t rem = n;
    for (int o = 0; o < 3; ++o) {
      if (!cands[o] || cands[o]->empty()) continue;
      fixed[o] = (*cands[o])[rem % cands[o]->size()];
      rem /= cands[o]->size();
    }
    // Known data violating a rule rules out this combination.
    bool ok = true;
    for (int o = 0; o < 3 && ok; ++o) {
      if (unknown && o == static_cast<int>(*unknown)) continue;
      for (const auto& [h, m] : fixed[o])
        if (m && !allowed(rules, static_cast<Obj>(o), key, h)) ok = false;
      if (!euler_ok(rules, static_cast<Obj>(o), key, fixed[o])) ok = false;
    }
    if (!ok) continue;

    struct Pos {
      int obj, h;
    };
    std::vector<Pos> pos;
    for (int h = lo; h <= hi; ++h)
      for (int o = 0; o < 3; ++o) pos.push_back({o, h});
    auto known_at = [&](std::size_t i) {
      auto it = fixed[pos[i].obj].find(pos[i].h);
      return it == fixed[pos[i].obj].end() ? 0LL : it->second;
    };
    auto is_unknown = [&](std::size_t i) { return unknown && pos[i].obj == static_cast<int>(*unknown); };

    Profile cur;
    std::function<void(std::size_t, long long)> dfs = [&](std::size_t i, long long r_prev) {
      if (out.truncated) return;
      if (i == pos.size()) {
        if (r_prev != 0) return;
        if (unknown && !euler_ok(rules, *unknown, key, cur)) return;
        auto sol = fixed;
        if (unknown) sol[static_cast<int>(*unknown)] = cur;
        out.solutions.push_back(sol);
        if (out.solutions.size() >= kMaxSolutions) out.truncated = true;
        return;
      }
      if (!is_unknown(i)) {
        long long r = known_at(i) - r_prev;
        if (r >= 0) dfs(i + 1, r);
        return;
      }
      // The neighbours of an unknown entry are known, which bounds its rank.
      long long bound = i + 1 == pos.size() ? 0 : known_at(i + 1);
      if (!allowed(rules, *unknown, key, pos[i].h)) {
        if (r_prev == 0) dfs(i + 1, 0);
        return;
      }
      for (long long r = 0; r <= bound; ++r) {
        long long v = r_prev + r;
        if (v) cur[pos[i].h] = v;
        dfs(i + 1, r);
        cur.erase(pos[i].h);
      }
    };
    dfs(0, 0);
  }
  return out;
}

std::set<Profile> distinct(const SliceOutcome& s, Obj o) {
  std::set<Profile> out;
  for (const auto& sol : s.solutions) out.insert(sol[static_cast<int>(o)]);
  return out;
}

}  // namespace

bool TriangleSolution::unique() const {
  for (const auto& s : slices)
    for (int o = 0; o < 3; ++o)
      if (distinct(s, static_cast<Obj>(o)).size() > 1) return false;
  return true;
}

Family TriangleSolution::family(Obj o) const {
  Family f;
  for (const auto& s : slices) {
    auto d = distinct(s, o);
    if (d.size() == 1 && d.begin()->empty()) continue;
    f[s.key] = {d.begin(), d.end()};
  }
  return f;
}

CohPoly TriangleSolution::value(Obj o, const std::string& group) const {
  for (const auto& s : slices)
    if (distinct(s, o).size() > 1)
      throw UsageError(name + ": " + obj_name(o) + " is ambiguous in slice " + slice_name(s.key));
  return poly_of(family(o), group);
}

std::vector<std::string> TriangleSolution::ambiguity_report(Obj o) const {
  std::vector<std::string> out;
  for (const auto& s : slices) {
    auto d = distinct(s, o);
    if (d.size() <= 1) continue;
    std::map<int, std::pair<long long, long long>> range;
    for (const auto& p : d)
      for (const auto& [h, m] : p) range.emplace(h, std::make_pair(m, m));
    for (auto& [h, mm] : range) {
      for (const auto& p : d) {
        auto it = p.find(h);
        long long m = it == p.end() ? 0 : it->second;
        mm.first = std::min(mm.first, m);
        mm.second = std::max(mm.second, m);
      }
    }
    std::string line = slice_name(s.key) + ": " + std::to_string(d.size()) + " solutions;";
    for (const auto& [h, mm] : range)
      line += " h^" + std::to_string(h) + " in [" + std::to_string(mm.first) + "," + std::to_string(mm.second) + "]";
    if (s.truncated) line += " (enumeration truncated)";
    out.push_back(line);
  }
  return out;
}

TriangleSolution solve_triangle(const Triangle& tri, const std::vector<Rule>& rules, const CharSet& cs) {
  std::optional<Obj> unknown;
  for (int o = 0; o < 3; ++o)
    if (!tri.objs[o]) {
      if (unknown) throw UsageError(tri.name + ": at most one object of a triangle may be unknown");
      unknown = static_cast<Obj>(o);
    }
  std::set<SliceKey> keys;
  for (const auto& obj : tri.objs)
    if (obj)
      for (const auto& [k, c] : *obj) keys.insert(k);

  TriangleSolution sol;
  sol.name = tri.name;
  const std::vector<Profile> zero{Profile{}};
  for (const auto& k : keys) {
    std::array<const std::vector<Profile>*, 3> cands{};
    for (int o = 0; o < 3; ++o) {
      if (!tri.objs[o]) continue;
      auto it = tri.objs[o]->find(k);
      cands[o] = it == tri.objs[o]->end() ? &zero : &it->second;
    }
    std::vector<const Rule*> active;
    for (const auto& r : rules)
      if (rule_applies(r, k, cs)) active.push_back(&r);
    SliceOutcome s = solve_slice(k, cands, unknown, active);
    if (s.solutions.empty()) {
      bool trivially_zero = true;
      for (const auto* c : cands)
        if (c)
          for (const auto& p : *c)
            for (const auto& [h, m] : p) trivially_zero &= m == 0;
      if (!trivially_zero) throw ContradictionError(tri.name + ": no consistent cohomology in slice " + slice_name(k));
    }
    sol.slices.push_back(std::move(s));
  }
  return sol;
}

std::vector<SliceKey> euler_check(const CohPoly& open, const CohPoly& total, const CohPoly& closed) {
  std::map<SliceKey, long long> sum;
  auto acc = [&](const CohPoly& p, int sign) {
    for (const auto& [g, c] : p.data())
      for (const auto& [t, m] : c) sum[{t.chr, t.unity, g.t2}] += sign * (g.h % 2 ? -m : m);
  };
  acc(total, 1);
  acc(open, -1);
  acc(closed, -1);
  std::vector<SliceKey> bad;
  for (const auto& [k, s] : sum)
    if (s != 0) bad.push_back(k);
  return bad;
}

std::vector<Rule> derive_st_id_placements(const CohPoly& solved_principal_total, const CharSet& l,
                                          const std::vector<Grade>& st_cells, const std::vector<Grade>& id_cells,
                                          const std::string& source) {
  std::set<Grade> companions;
  for (const auto& [g, c] : solved_principal_total.data())
    for (const auto& [t, m] : c)
      if (t.chr != "St" && t.chr != "Id" && l.support(t.chr) == "1" && m > 0) companions.insert(g);
  std::vector<Rule> out;
  for (auto [chr, cells] : {std::pair{"St", &st_cells}, std::pair{"Id", &id_cells}}) {
    Rule r;
    r.kind = RuleKind::PlacementAllow;
    r.object = Obj::Total;
    r.chr = chr;
    std::set<Grade> all(companions.begin(), companions.end());
    all.insert(cells->begin(), cells->end());
    r.cells.assign(all.begin(), all.end());
    r.source = source;
    out.push_back(r);
  }
  return out;
}

}  // namespace dlcoho
