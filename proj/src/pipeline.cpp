#include "dlcoho/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "dlcoho/braid.hpp"
#include "dlcoho/error.hpp"
#include "dlcoho/pieces.hpp"
#include "dlcoho/sequences.hpp"
#include "dlcoho/weyl.hpp"

namespace dlcoho {

using nlohmann::json;
namespace fs = std::filesystem;

std::string default_data_dir() {
  if (const char* env = std::getenv("DLCOHO_DATA"); env && *env) return env;
  return DLCOHO_DEFAULT_DATA;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string resolve_scenario(const std::string& name_or_path, const std::string& data_dir) {
  if (fs::exists(name_or_path)) return name_or_path;
  for (const auto& cand : {data_dir + "/" + name_or_path, data_dir + "/scenarios/" + name_or_path,
                           data_dir + "/scenarios/" + name_or_path + ".json"})
    if (fs::exists(cand)) return cand;
  throw ConfigError("no scenario '" + name_or_path + "'");
}

std::vector<DiffEntry> diff_tables(const CohPoly& actual, const CohPoly& golden) {
  if (!actual.group().empty() && !golden.group().empty() && actual.group() != golden.group())
    throw UsageError("cannot diff a " + actual.group() + " table against a " + golden.group() + " table");
  std::map<std::pair<Grade, Term>, std::pair<long long, long long>> all;
  for (const auto& [g, c] : actual.data())
    for (const auto& [t, m] : c) all[{g, t}].first = m;
  for (const auto& [g, c] : golden.data())
    for (const auto& [t, m] : c) all[{g, t}].second = m;
  std::vector<DiffEntry> out;
  for (const auto& [k, v] : all)
    if (v.first != v.second) out.push_back({k.first, k.second.chr, k.second.unity, v.first, v.second});
  return out;
}

json diff_to_json(const std::vector<DiffEntry>& diff) {
  json out = json::array();
  for (const auto& d : diff)
    out.push_back({{"h", d.grade.h},
                   {"t2", d.grade.t2},
                   {"char", d.chr},
                   {"unity", d.unity.label()},
                   {"actual", d.actual},
                   {"golden", d.golden}});
  return out;
}

namespace {

std::string str(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) throw ConfigError(where + ": missing string field '" + key + "'");
  return j[key].get<std::string>();
}

int integer(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ConfigError(where + ": missing integer field '" + key + "'");
  return j[key].get<int>();
}

json conditions_json(const std::set<std::string>& c) { return json(std::vector<std::string>(c.begin(), c.end())); }

// Tracks the worst outcome so far.
struct Verdicts {
  bool hard = false;
  bool conditional = false;
  int code() const { return hard ? 1 : conditional ? 2 : 0; }
  void fail(bool is_conditional) { (is_conditional ? conditional : hard) = true; }
};

struct Context {
  std::string data_dir;
  std::map<std::string, bool> flags;
  int jobs = 1;
  Verdicts v;
  json report;
};

std::string data_path(const Context& cx, const std::string& rel) { return cx.data_dir + "/" + rel; }

// ---------------------------------------------------------------------------
// Families built from weighted references, used by the cuspidal stages.

Family family_scale(const Family& f, long long k) {
  Family out;
  if (k == 0) return out;
  for (const auto& [key, cands] : f) {
    auto& dst = out[key];
    for (const auto& p : cands) {
      Profile q;
      for (const auto& [h, m] : p) q[h] = m * k;
      dst.push_back(q);
    }
  }
  return out;
}

Family family_sum(const Family& a, const Family& b) {
  Family out = a;
  for (const auto& [key, cands] : b) {
    auto it = out.find(key);
    if (it == out.end()) {
      out[key] = cands;
      continue;
    }
    std::vector<Profile> merged;
    for (const auto& x : it->second)
      for (const auto& y : cands) {
        Profile z = x;
        for (const auto& [h, m] : y) z[h] += m;
        if (std::find(merged.begin(), merged.end(), z) == merged.end()) merged.push_back(z);
      }
    if (merged.size() > 10000) throw ResourceError("too many candidates combining slice " + slice_name(key));
    it->second = merged;
  }
  return out;
}

bool family_unique(const Family& f) {
  return std::all_of(f.begin(), f.end(), [](const auto& kv) { return kv.second.size() == 1; });
}

struct CuspidalChain {
  const CharSet* g;
  std::map<std::string, Family> values;

  Family evaluate(const json& terms, const std::string& where) const {
    Family out;
    for (const auto& t : terms) {
      std::string ref = str(t, "ref", where);
      auto it = values.find(ref);
      if (it == values.end()) throw ConfigError(where + ": unknown reference '" + ref + "'");
      long long mult = t.value("mult", 1);
      int gm = t.value("gm", 0);
      Family f = it->second;
      if (gm > 0) {
        if (!family_unique(f)) throw ConfigError(where + ": G_m factor applied to an undetermined value");
        f = family_of(power(CohPoly::gm_factor(), gm) * poly_of(f, g->group()));
      }
      out = family_sum(out, family_scale(f, mult));
    }
    return out;
  }
};

std::string family_string(const Family& f, const std::string& group) {
  if (family_unique(f)) return poly_of(f, group).to_string();
  std::string s;
  for (const auto& [k, c] : f) {
    if (!s.empty()) s += "; ";
    s += slice_name(k) + ": " + std::to_string(c.size()) + " candidates";
  }
  return s;
}

// ---------------------------------------------------------------------------

struct Piece {
  std::string name, role;
  CohPoly value;
};

struct SupportOutcome {
  std::string status;  // determined, ambiguous, undetermined
  std::set<std::string> conditions;
  CohPoly value;
  std::vector<std::string> ambiguity;
};

PipelineResult run(const std::string& path, Context& cx, int depth);

}  // namespace

PipelineResult run_pipeline(const std::string& scenario_path, const PipelineOptions& opts) {
  Context cx;
  cx.data_dir = opts.data_dir.empty() ? default_data_dir() : opts.data_dir;
  cx.jobs = std::max(1, opts.jobs);
  std::string path = resolve_scenario(scenario_path, cx.data_dir);
  json sc = read_json(path);
  if (opts.flags) {
    cx.flags = *opts.flags;
  } else if (sc.contains("flags")) {
    for (const auto& [k, v] : sc["flags"].items()) cx.flags[k] = v.get<bool>();
  }
  for (const auto& [k, v] : cx.flags)
    if (std::find(kAssumptionFlags.begin(), kAssumptionFlags.end(), k) == kAssumptionFlags.end())
      throw ConfigError("unknown assumption flag '" + k + "'");
  return run(path, cx, 0);
}

namespace {

PipelineResult run(const std::string& path, Context& outer, int depth) {
  if (depth > 4) throw ConfigError("scenario nesting too deep at " + path);
  Context cx;
  cx.data_dir = outer.data_dir;
  cx.flags = outer.flags;
  cx.jobs = outer.jobs;
  json sc = read_json(path);
  const std::string where = path;
  json& rep = cx.report;

  const std::string group = str(sc, "group", where);
  const int d = integer(sc, "d", where);
  auto rs = RootSystem::make(group);
  const WeylElt w = rs->parse_element(str(sc, "w", where));
  const NodeSet I = rs->parse_set(str(sc, "I", where));
  CharSet g = load_charset(data_path(cx, str(sc, "charset", where)));
  CharSet l = load_charset(data_path(cx, str(sc, "levi_charset", where)));
  Block block = load_block(data_path(cx, str(sc, "block", where)), g);
  RestrictionTable restr = load_restriction(data_path(cx, str(sc, "restriction", where)), g, l);
  json golden = read_json(data_path(cx, str(sc, "golden", where)));

  rep["scenario"] = str(sc, "name", where);
  rep["group"] = group;
  rep["d"] = d;
  rep["w"] = w.to_string();
  rep["I"] = rs->format_set(I);
  json flags = json::object();
  for (const auto& [k, v] : cx.flags) flags[k] = v;
  rep["flags"] = flags;

  // 1. w is a d-th root of pi.
  {
    bool ok = is_root_of_pi(w, d);
    bool below = d > 1 && is_root_of_pi(w, d - 1);
    bool above = is_root_of_pi(w, d + 1);
    int order = element_order(w);
    bool pass = ok && !below && !above && order == d;
    rep["stages"]["root_of_pi"] = {{"root", ok}, {"root_for_d_minus_1", below}, {"root_for_d_plus_1", above},
                                   {"order", order}, {"ok", pass}};
    if (!pass) cx.v.fail(false);
  }

  // 2. Non-empty pieces of the coset decomposition.
  const WeylElt w0 = rs->longest_element();
  {
    auto scan = scan_cosets(w, I, cx.jobs);
    std::set<WeylElt> found, expected;
    json js = json::array();
    for (const auto& c : scan)
      if (c.report.verdict == Verdict::NonEmpty) {
        found.insert(c.x);
        js.push_back(c.x.to_string());
      }
    json je = json::array();
    for (const auto& u : sc.at("expected_cosets")) {
      WeylElt x = min_coset_rep(w0 * rs->parse_element(u.get<std::string>()), I);
      expected.insert(x);
      je.push_back(x.to_string());
    }
    bool unknown = std::any_of(scan.begin(), scan.end(), [](const auto& c) { return c.report.verdict == Verdict::Unknown; });
    bool pass = found == expected && !unknown;
    rep["stages"]["coset_scan"] = {{"nonempty", js}, {"expected", je}, {"unknown_verdicts", unknown}, {"ok", pass}};
    if (!pass) cx.v.fail(false);
  }

  // 3-5. Piece decompositions and the cohomology of each piece quotient.
  std::vector<Piece> pieces;
  std::map<std::string, SeriesState> open_series;  // L-series known in the open part
  bool open_from_table = true;
  PipelineResult nested;
  json jp = json::array();
  for (const auto& p : sc.at("pieces")) {
    const std::string pw = where + " piece " + str(p, "name", where);
    NodeSet K = rs->parse_set(str(p, "K", pw));
    WeylElt x = min_coset_rep(w0 * rs->parse_element(str(p, "coset", pw)), K);
    std::vector<WeylElt> factors;
    std::vector<int> gammas;
    WeylElt prod = rs->identity();
    for (const auto& f : p.at("factors")) {
      factors.push_back(rs->parse_element(str(f, "w", pw)));
      prod = prod * factors.back();
      int gamma = integer(f, "gamma", pw);
      gammas.push_back(gamma - 1);
    }
    auto dec = check_piece_decomposition(factors, K, x, gammas);
    const int pd = integer(p, "d", pw), pe = integer(p, "e", pw);
    WeylElt levi = rs->parse_element(str(p, "levi", pw));
    bool dec_ok = dec.ok && prod == w && dec.d == pd && dec.e == pe && dec.levi_element == levi;

    // The Levi element must match the base data.
    const json& base = p.at("base");
    std::string levi_check;
    bool levi_ok = false;
    CohPoly base_poly;
    auto is_coxeter = [](const WeylElt& v, NodeSet J) { return v.length() == popcount(J) && support(v) == J; };
    if (base.contains("pipeline")) {
      std::string npath = data_path(cx, base["pipeline"].get<std::string>());
      nested = run(npath, cx, depth + 1);
      WeylElt nw = rs->parse_element(nested.report["w"].get<std::string>());
      levi_ok = nw == levi && K == I;
      levi_check = "equals the element of the nested scenario";
      base_poly = nested.table;
      if (nested.group != l.group()) throw ConfigError(pw + ": nested scenario is over " + nested.group);
      open_from_table = false;
      open_series = nested.series;
      rep["nested"] = {{"scenario", nested.report["scenario"]}, {"exit_code", nested.exit_code}};
    } else {
      TableFile t = load_table(data_path(cx, str(base, "table", pw)), l);
      WeylElt te = rs->parse_element(t.element);
      if (te == levi && K == I) {
        levi_ok = true;
        levi_check = "equals the table element";
        base_poly = t.poly;
      } else if (is_coxeter(levi, K) && is_coxeter(te, I)) {
        levi_ok = true;
        levi_check = "Coxeter element of the Levi";
        base_poly = coxeter_quotient(popcount(K) - popcount(I), t.poly);
      } else {
        levi_check = "does not match the table element " + t.element;
      }
    }
    CohPoly value = gm_ga_product(pd, pe, base_poly);
    if (value.group().empty() && !value.empty()) throw ConfigError(pw + ": scalar base");
    if (value.empty()) value = CohPoly(l.group());
    pieces.push_back({str(p, "name", pw), str(p, "role", pw), value});

    json jf = json::array();
    for (const auto& f : dec.factors)
      jf.push_back({{"w", f.w.to_string()}, {"conjugated", f.v.to_string()}, {"case", std::string(1, f.case_tag)},
                    {"e_term", f.e_term}, {"ok", f.ok}, {"failure", f.failure}});
    jp.push_back({{"name", pieces.back().name},
                  {"x", x.to_string()},
                  {"K", rs->format_set(K)},
                  {"d", dec.d},
                  {"e", dec.e},
                  {"levi", dec.levi_element.to_string()},
                  {"factors", jf},
                  {"levi_check", levi_check},
                  {"ok", dec_ok && levi_ok}});
    if (!dec_ok || !levi_ok) cx.v.fail(false);
  }
  rep["stages"]["pieces"] = jp;

  CohPoly open(l.group()), closed(l.group());
  int n_open = 0;
  for (const auto& p : pieces) {
    if (p.role == "open") {
      open = open + p.value;
      ++n_open;
    } else if (p.role == "closed") {
      closed = closed + p.value;
    } else {
      throw ConfigError(where + ": piece role must be open or closed");
    }
  }
  if (n_open != 1) throw ConfigError(where + ": expected exactly one open piece");

  // 6. Displays of the piece quotients.
  {
    json jd = json::array();
    for (const auto& disp : golden.value("displays", json::array())) {
      std::string of = str(disp, "of", where);
      const CohPoly* target = nullptr;
      if (of == "open") target = &open;
      if (of == "closed") target = &closed;
      for (const auto& p : pieces)
        if (p.name == of) target = &p.value;
      if (!target) throw ConfigError(where + ": display of unknown piece '" + of + "'");
      auto diff = diff_tables(*target, parse_poly(str(disp, "expr", where), l));
      jd.push_back({{"name", str(disp, "name", where)}, {"ok", diff.empty()}, {"diff", diff_to_json(diff)}});
      if (!diff.empty()) cx.v.fail(false);
    }
    rep["stages"]["displays"] = jd;
  }

  // 7. The quotient triangle, one Harish-Chandra series of L at a time.
  std::set<std::string> l_series;
  for (const CohPoly* p : {&open, &closed})
    for (const auto& [gr, c] : p->data())
      for (const auto& [t, m] : c) l_series.insert(l.support(t.chr));
  for (const auto& [s, st] : open_series) l_series.insert(s);
  std::vector<std::string> order(l_series.begin(), l_series.end());
  std::stable_partition(order.begin(), order.end(), [](const std::string& s) { return s == "1"; });

  std::map<std::string, SupportOutcome> quotient;
  json jq = json::array();
  for (const auto& s : order) {
    SupportOutcome out;
    SeriesState known{true, {}};
    if (!open_from_table) {
      auto it = open_series.find(s);
      known = it == open_series.end() ? SeriesState{} : it->second;
    }
    out.conditions = known.conditions;
    CohPoly o = filter_support(open, l, s), c = filter_support(closed, l, s);
    if (!known.known) {
      out.status = "undetermined";
      out.ambiguity.push_back("the open piece has no known contribution from this series");
    } else {
      Triangle tri{"quotient/" + s, {family_of(o), std::nullopt, family_of(c)}};
      std::vector<Rule> rules;
      if (s == "1" && sc.contains("placements")) {
        auto first = solve_triangle(tri, {}, l);
        CohPoly others(l.group());
        for (const auto& sl : first.slices) {
          if (sl.key.chr == "St" || sl.key.chr == "Id") continue;
          TriangleSolution one{"", {sl}};
          if (!one.unique()) throw ContradictionError(where + ": principal slice " + slice_name(sl.key) + " is ambiguous");
          others = others + one.value(Obj::Total, l.group());
        }
        const json& pl = sc["placements"];
        auto cells = [&](const char* key) {
          std::vector<Grade> v;
          for (const auto& c : pl.at(key)) v.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
          return v;
        };
        rules = derive_st_id_placements(others, l, cells("St"), cells("Id"), pl.value("source", ""));
      }
      auto sol = solve_triangle(tri, rules, l);
      if (sol.unique()) {
        out.status = "determined";
        out.value = sol.value(Obj::Total, l.group());
      } else {
        out.status = "ambiguous";
        for (const auto& sl : sol.slices)
          for (const auto& line : TriangleSolution{"", {sl}}.ambiguity_report(Obj::Total))
            out.ambiguity.push_back(line);
      }
    }
    if (out.value.empty()) out.value = CohPoly(l.group());
    jq.push_back({{"series", s},
                  {"status", out.status},
                  {"conditional_on", conditions_json(out.conditions)},
                  {"value", out.status == "determined" ? out.value.to_string() : ""},
                  {"ambiguity", out.ambiguity}});
    quotient[s] = out;
  }
  {
    std::set<std::string> ambiguous, expected;
    for (const auto& [s, o] : quotient)
      if (o.status == "ambiguous") ambiguous.insert(s);
    for (const auto& e : sc.value("expect_ambiguous", json::array())) expected.insert(e.get<std::string>());
    bool pass = ambiguous == expected;
    rep["stages"]["quotient"] = {{"series", jq},
                                 {"ambiguous", std::vector<std::string>(ambiguous.begin(), ambiguous.end())},
                                 {"expected_ambiguous", std::vector<std::string>(expected.begin(), expected.end())},
                                 {"ambiguity_ok", pass}};
    if (!pass) cx.v.fail(false);

    json jg = json::array();
    for (const auto& q : golden.value("quotient", json::array())) {
      std::set<std::string> cond;
      for (const auto& c : q.value("conditional_on", json::array())) cond.insert(c.get<std::string>());
      CohPoly actual(l.group());
      std::string status = "match";
      std::set<std::string> got;
      for (const auto& s : q.at("supports")) {
        auto it = quotient.find(s.get<std::string>());
        if (it == quotient.end()) continue;
        if (it->second.status != "determined") status = "undetermined";
        actual = actual + it->second.value;
        got.insert(it->second.conditions.begin(), it->second.conditions.end());
      }
      std::vector<DiffEntry> diff;
      if (status == "match") {
        diff = diff_tables(actual, parse_poly(str(q, "expr", where), l));
        if (!diff.empty()) status = "mismatch";
        else if (got != cond) status = "conditions differ";
      }
      jg.push_back({{"series", q.at("supports")}, {"conditional_on", conditions_json(cond)}, {"status", status},
                    {"diff", diff_to_json(diff)}});
      if (status != "match") cx.v.fail(!cond.empty());
    }
    rep["stages"]["quotient"]["golden"] = jg;
  }

  // 8. Harish-Chandra lift to the block, series by series.
  struct Row {
    std::string status;
    std::set<std::string> conditions;
    CohPoly value;
  };
  std::map<std::string, Row> rows;  // G-series -> lifted rows
  std::map<std::string, std::vector<std::string>> members_of;
  for (const auto& m : block.members)
    if (g.at(m).kind != SeriesKind::Cuspidal) members_of[g.support(m)].push_back(m);
  json jl = json::array();
  for (const auto& [s, members] : members_of) {
    Row row;
    json entry = {{"series", s}, {"members", members}};
    auto it = quotient.find(s);
    if (it == quotient.end()) {
      row.status = "determined";
      row.value = CohPoly(g.group());
    } else if (it->second.status != "determined") {
      row.status = "undetermined";
      row.conditions = it->second.conditions;
    } else {
      row.conditions = it->second.conditions;
      auto lift = hc_lift(it->second.value, restr, members, g);
      if (!lift.unique) resolve_by_constituents(lift, members);
      entry["resolved_by_constituents"] = lift.resolved_by_constituents;
      if (lift.unique) {
        row.status = "determined";
        row.value = lift.lifted;
      } else {
        row.status = "ambiguous";
        json alts = json::array();
        for (const auto& a : lift.ambiguities)
          alts.push_back({{"h", a.grade.h}, {"t2", a.grade.t2}, {"choices", a.solutions.size()}});
        entry["ambiguities"] = alts;
      }
    }
    if (row.value.empty()) row.value = CohPoly(g.group());
    entry["status"] = row.status;
    entry["conditional_on"] = conditions_json(row.conditions);
    entry["value"] = row.status == "determined" ? row.value.to_string() : "";
    jl.push_back(entry);
    rows[s] = row;
  }
  rep["stages"]["lift"] = jl;

  // 9. Cuspidal characters of G.
  CohPoly cusp(g.group());
  bool cusp_ok = true;
  {
    const json& cj = sc.at("cuspidal");
    json jc;
    if (cj.contains("imported")) {
      cusp = parse_poly(str(cj, "imported", where), g);
      jc["imported"] = true;
      jc["source"] = cj.value("source", "");
    } else {
      CuspidalChain chain{&g, {}};
      for (const auto& [name, expr] : cj.at("values").items()) chain.values[name] = family_of(parse_poly(expr, g));
      json js = json::array();
      std::vector<std::string> stage_names;
      for (const auto& st : cj.at("stages")) {
        const std::string sn = str(st, "name", where);
        const std::string sw = where + " stage " + sn;
        Triangle tri{sn, {}};
        int unknown = -1;
        const char* keys[3] = {"open", "total", "closed"};
        for (int k = 0; k < 3; ++k) {
          const json& o = st.at(keys[k]);
          if (o.is_string() && o.get<std::string>() == "unknown") {
            if (unknown >= 0) throw ConfigError(sw + ": two unknown objects");
            unknown = k;
          } else {
            tri.objs[k] = chain.evaluate(o, sw);
          }
        }
        if (unknown < 0) throw ConfigError(sw + ": no unknown object");
        std::vector<Rule> rules;
        for (const auto& r : st.value("rules", json::array())) {
          Rule rule;
          rule.object = parse_obj(str(r, "object", sw));
          rule.source = r.value("source", "");
          std::string kind = str(r, "kind", sw);
          if (kind == "window") {
            rule.kind = RuleKind::VanishWindow;
            rule.lo = integer(r, "lo", sw);
            rule.hi = integer(r, "hi", sw);
          } else if (kind == "coxeter_exclusion") {
            rule.kind = RuleKind::EigenvalueExclude;
            rule.chr = "@coxeter";
            rule.cells = {{integer(r, "h", sw), integer(r, "t2", sw)}};
          } else {
            throw ConfigError(sw + ": unknown rule kind '" + kind + "'");
          }
          rules.push_back(rule);
        }
        auto sol = solve_triangle(tri, rules, g);
        Obj uo = static_cast<Obj>(unknown);
        chain.values[sn] = sol.family(uo);
        json entry = {{"name", sn},
                      {"unknown", obj_name(uo)},
                      {"unique", family_unique(chain.values[sn])},
                      {"value", family_string(chain.values[sn], g.group())}};
        // Inputs that were still open before this stage and are now pinned down.
        json narrowed = json::object();
        for (const auto& ref_key : {"open", "total", "closed"}) {
          const json& o = st.at(ref_key);
          if (!o.is_array()) continue;
          for (const auto& t : o) {
            std::string ref = t.at("ref").get<std::string>();
            if (family_unique(chain.values[ref]) || t.value("mult", 1) != 1 || t.value("gm", 0) != 0 || o.size() != 1)
              continue;
            Family f = sol.family(parse_obj(ref_key));
            if (family_unique(f)) {
              chain.values[ref] = f;
              narrowed[ref] = poly_of(f, g.group()).to_string();
            }
          }
        }
        entry["narrowed"] = narrowed;
        js.push_back(entry);
        stage_names.push_back(sn);
      }
      jc["stages"] = js;
      json jchk = json::array();
      for (const auto& chk : cj.value("checks", json::array())) {
        Family a = chain.evaluate(chk.at("lhs"), where), b = chain.evaluate(chk.at("rhs"), where);
        bool ok = a == b;
        jchk.push_back({{"name", str(chk, "name", where)}, {"ok", ok}});
        if (!ok) cusp_ok = false;
      }
      jc["checks"] = jchk;
      const Family& result = chain.values[stage_names.back()];
      if (family_unique(result)) {
        cusp = poly_of(result, g.group());
      } else {
        cusp_ok = false;
      }
    }
    if (cusp.empty()) cusp = CohPoly(g.group());
    jc["value"] = cusp.to_string();
    if (golden.contains("cuspidal")) {
      auto diff = diff_tables(cusp, parse_poly(str(golden, "cuspidal", where), g));
      jc["golden_diff"] = diff_to_json(diff);
      if (!diff.empty()) cusp_ok = false;
    }
    jc["ok"] = cusp_ok;
    rep["stages"]["cuspidal"] = jc;
    if (!cusp_ok) cx.v.fail(false);
  }

  // 10. The table, split by the assumptions each row rests on.
  PipelineResult res;
  res.group = g.group();
  res.table = cusp;
  std::map<std::set<std::string>, CohPoly> parts;
  parts[{}] = CohPoly(g.group());
  parts[{}] = parts[{}] + cusp;
  std::set<std::string> undetermined;
  for (const auto& [s, row] : rows) {
    if (row.status == "determined") {
      auto& part = parts[row.conditions];
      if (part.group().empty()) part = CohPoly(g.group());
      part = part + row.value;
      res.table = res.table + row.value;
    } else {
      undetermined.insert(s);
    }
  }
  {
    json jt;
    jt["unconditional"] = parts[{}].to_string();
    json jcnd = json::array();
    for (const auto& [cond, p] : parts)
      if (!cond.empty()) jcnd.push_back({{"on", conditions_json(cond)}, {"value", p.to_string()}});
    jt["conditional"] = jcnd;
    jt["undetermined_series"] = std::vector<std::string>(undetermined.begin(), undetermined.end());
    jt["canonical"] = to_json(res.table);
    rep["stages"]["table"] = jt;
  }

  // 11. Golden comparison.
  {
    const json& gt = golden.at("table");
    json jd;
    auto un = diff_tables(parts[{}], parse_poly(str(gt, "unconditional", where), g));
    bool un_ok = un.empty();
    for (const auto& s : undetermined)
      for (const auto& [gr, c] : parse_poly(str(gt, "unconditional", where), g).data())
        for (const auto& [t, m] : c)
          if (g.support(t.chr) == s) un_ok = false;
    jd["unconditional"] = {{"status", un_ok ? "match" : "mismatch"}, {"diff", diff_to_json(un)}};
    if (!un_ok) cx.v.fail(false);
    json jc = json::array();
    std::set<std::set<std::string>> seen;
    for (const auto& part : gt.value("conditional", json::array())) {
      std::set<std::string> cond;
      for (const auto& c : part.at("on")) cond.insert(c.get<std::string>());
      seen.insert(cond);
      CohPoly want = parse_poly(str(part, "expr", where), g);
      std::set<std::string> series;
      for (const auto& [gr, c] : want.data())
        for (const auto& [t, m] : c) series.insert(g.support(t.chr));
      std::string status;
      std::vector<DiffEntry> diff;
      bool undet = std::any_of(series.begin(), series.end(), [&](const auto& s) { return undetermined.count(s); });
      if (undet) {
        status = "undetermined";
      } else {
        auto it = parts.find(cond);
        diff = diff_tables(it == parts.end() ? CohPoly(g.group()) : it->second, want);
        status = diff.empty() ? "match" : "mismatch";
      }
      jc.push_back({{"on", conditions_json(cond)}, {"status", status}, {"diff", diff_to_json(diff)}});
      if (status != "match") cx.v.fail(true);
    }
    for (const auto& [cond, p] : parts)
      if (!cond.empty() && !seen.count(cond) && !p.empty()) {
        jc.push_back({{"on", conditions_json(cond)}, {"status", "unexpected"}, {"diff", diff_to_json(diff_tables(p, CohPoly(g.group())))}});
        cx.v.fail(true);
      }
    jd["conditional"] = jc;
    rep["stages"]["diff"] = jd;
  }

  // What a scenario nesting this one may rely on.
  for (const auto& c : g.chars()) {
    std::string s = g.support(c.name);
    if (res.series.count(s)) continue;
    SeriesState st;
    if (c.kind == SeriesKind::Cuspidal) {
      st.known = cusp_ok;
    } else if (auto it = rows.find(s); it != rows.end()) {
      st.known = it->second.status == "determined";
      st.conditions = it->second.conditions;
    }
    res.series[s] = st;
  }
  const json assumptions = sc.value("assumptions", json::object());
  for (const auto& [flag, series] : assumptions.items()) {
    auto f = cx.flags.find(flag);
    if (f == cx.flags.end() || !f->second) continue;
    for (const auto& s : series) {
      auto& st = res.series[s.get<std::string>()];
      if (st.known) continue;
      st.known = true;
      st.conditions = {flag};
    }
  }
  json jser = json::object();
  for (const auto& [s, st] : res.series)
    jser[s] = {{"known", st.known}, {"conditional_on", conditions_json(st.conditions)}};
  rep["output_series"] = jser;

  res.exit_code = cx.v.code();
  rep["exit_code"] = res.exit_code;
  res.report = std::move(rep);
  return res;
}

}  // namespace

}  // namespace dlcoho
