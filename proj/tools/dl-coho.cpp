// dl-coho: command-line driver. Every subcommand prints JSON unless --pretty.
#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "dlcoho/brauer.hpp"
#include "dlcoho/braid.hpp"
#include "dlcoho/error.hpp"
#include "dlcoho/klrs.hpp"
#include "dlcoho/oracle.hpp"
#include "dlcoho/pieces.hpp"
#include "dlcoho/pipeline.hpp"
#include "dlcoho/sequences.hpp"

using namespace dlcoho;
using nlohmann::json;

namespace {

struct Globals {
  bool pretty = false;
  std::string data;
  int jobs = 1;
  std::string data_dir() const { return data.empty() ? default_data_dir() : data; }
};

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const Globals& g, const json& j) {
  if (g.pretty)
    flatten(j, "", std::cout);
  else
    std::cout << j.dump() << "\n";
}

std::shared_ptr<const RootSystem> group(const std::string& name) { return RootSystem::make(name); }

// ---------------------------------------------------------------------------

json root_of_pi_json(const WeylElt& w, int d) {
  return {{"w", w.to_string()},
          {"length", w.length()},
          {"d", d},
          {"root", is_root_of_pi(w, d)},
          {"root_for_d_minus_1", d > 1 && is_root_of_pi(w, d - 1)},
          {"root_for_d_plus_1", is_root_of_pi(w, d + 1)},
          {"order", element_order(w)}};
}

json report_json(const PieceReport& r) {
  json j = {{"verdict", verdict_name(r.verdict)}, {"method", r.method}};
  if (r.witness) j["witness"] = r.witness->to_string();
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

Family family_from(const json& o, const CharSet& cs) { return family_of(parse_poly(o.get<std::string>(), cs)); }

// {"charset", "open"|"total"|"closed": expr or "unknown", "rules": [...]}
json solve_file(const std::string& path, const std::string& data_dir) {
  json spec = read_json(path);
  CharSet cs = load_charset(data_dir + "/" + spec.at("charset").get<std::string>());
  Triangle tri{spec.value("name", path), {}};
  int unknown = -1;
  const char* keys[3] = {"open", "total", "closed"};
  for (int k = 0; k < 3; ++k) {
    const json& o = spec.at(keys[k]);
    if (o.get<std::string>() == "unknown")
      unknown = k;
    else
      tri.objs[k] = family_from(o, cs);
  }
  if (unknown < 0) throw ConfigError(path + ": one object must be 'unknown'");
  std::vector<Rule> rules;
  for (const auto& r : spec.value("rules", json::array())) {
    Rule rule;
    rule.object = parse_obj(r.at("object").get<std::string>());
    std::string kind = r.at("kind").get<std::string>();
    if (kind == "window") {
      rule.kind = RuleKind::VanishWindow;
      rule.lo = r.at("lo").get<int>();
      rule.hi = r.at("hi").get<int>();
    } else if (kind == "coxeter_exclusion") {
      rule.kind = RuleKind::EigenvalueExclude;
      rule.chr = "@coxeter";
      rule.cells = {{r.at("h").get<int>(), r.at("t2").get<int>()}};
    } else if (kind == "placement") {
      rule.kind = RuleKind::PlacementAllow;
      rule.chr = r.at("char").get<std::string>();
      for (const auto& c : r.at("cells")) rule.cells.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
    } else {
      throw ConfigError(path + ": unknown rule kind '" + kind + "'");
    }
    rules.push_back(rule);
  }
  auto sol = solve_triangle(tri, rules, cs);
  Obj uo = static_cast<Obj>(unknown);
  json out = {{"name", tri.name}, {"unknown", obj_name(uo)}, {"unique", sol.unique()}};
  if (sol.unique())
    out["value"] = sol.value(uo, cs.group()).to_string();
  else
    out["ambiguity"] = sol.ambiguity_report(uo);
  json slices = json::array();
  for (const auto& s : sol.slices) slices.push_back({{"slice", slice_name(s.key)}, {"solutions", s.solutions.size()}});
  out["slices"] = slices;
  return out;
}

json brauer_json(const TreeBundle& b) {
  auto r = validate_tree(b.tree, b.block, b.charset);
  auto j = j_invariants(b.table, b.umap);
  auto c = compare_labels(b.tree, j);
  json paths = json::object();
  for (const auto& [s, p] : r.series_paths) paths[s] = p;
  json unattached = json::array();
  for (const auto& [v, note] : b.unattached_labels) unattached.push_back({{"j", v}, {"note", note}});
  return {{"group", b.tree.group},
          {"d", b.tree.d},
          {"valid", r.ok},
          {"vertices", r.vertices},
          {"edges", r.edges},
          {"violations", r.violations},
          {"series_paths", paths},
          {"j", j},
          {"labels_compared", c.compared},
          {"label_mismatches", c.mismatches},
          {"unlabeled", c.unlabeled},
          {"unattached_labels", unattached}};
}

json pipeline_summary(const PipelineResult& r) {
  const json& s = r.report["stages"];
  json out = {{"scenario", r.report["scenario"]}, {"exit_code", r.exit_code}};
  out["root_of_pi"] = s["root_of_pi"]["ok"];
  out["coset_scan"] = s["coset_scan"]["ok"];
  out["cuspidal"] = s["cuspidal"]["ok"];
  out["unconditional"] = s["diff"]["unconditional"]["status"];
  json cond = json::array();
  for (const auto& c : s["diff"]["conditional"]) cond.push_back(c["status"]);
  out["conditional"] = cond;
  return out;
}

void print_pipeline_pretty(const PipelineResult& r) {
  const json& rep = r.report;
  const json& s = rep["stages"];
  std::cout << rep["scenario"].get<std::string>() << "  (" << rep["group"].get<std::string>() << ", d = " << rep["d"]
            << ", w = " << rep["w"].get<std::string>() << ")\n";
  std::cout << "  root of pi        " << (s["root_of_pi"]["ok"].get<bool>() ? "ok" : "FAIL") << "\n";
  std::cout << "  coset scan        " << (s["coset_scan"]["ok"].get<bool>() ? "ok" : "FAIL") << "  "
            << s["coset_scan"]["nonempty"].size() << " non-empty\n";
  for (const auto& p : s["pieces"])
    std::cout << "  piece " << p["name"].get<std::string>() << "  d = " << p["d"] << ", e = " << p["e"] << "  "
              << (p["ok"].get<bool>() ? "ok" : "FAIL") << "\n";
  for (const auto& q : s["quotient"]["series"]) {
    std::cout << "  quotient [" << q["series"].get<std::string>() << "] " << q["status"].get<std::string>();
    if (!q["conditional_on"].empty()) std::cout << "  if " << q["conditional_on"].dump();
    std::cout << "\n";
  }
  std::cout << "  cuspidal          " << s["cuspidal"]["value"].get<std::string>() << "\n";
  std::cout << "  table\n    " << s["table"]["unconditional"].get<std::string>() << "\n";
  for (const auto& c : s["table"]["conditional"])
    std::cout << "    if " << c["on"].dump() << ": " << c["value"].get<std::string>() << "\n";
  if (!s["table"]["undetermined_series"].empty())
    std::cout << "    undetermined: " << s["table"]["undetermined_series"].dump() << "\n";
  std::cout << "  golden: unconditional " << s["diff"]["unconditional"]["status"].get<std::string>();
  for (const auto& c : s["diff"]["conditional"])
    std::cout << ", " << c["on"].dump() << " " << c["status"].get<std::string>();
  std::cout << "\n  exit code " << r.exit_code << "\n";
}

// Quick end-to-end checks on small inputs; exits 0 when all pass.
int selftest(const Globals& g) {
  json checks = json::array();
  bool all = true;
  auto check = [&](const std::string& name, const std::function<bool()>& f) {
    bool ok = false;
    std::string err;
    try {
      ok = f();
    } catch (const std::exception& e) {
      err = e.what();
    }
    all = all && ok;
    json c = {{"name", name}, {"ok", ok}};
    if (!err.empty()) c["error"] = err;
    checks.push_back(c);
  };
  check("F4 element is an 8th root of pi", [] {
    auto w = group("F4")->parse_element("1 2 3 2 3 4");
    return is_root_of_pi(w, 8) && !is_root_of_pi(w, 7) && !is_root_of_pi(w, 9);
  });
  check("F4 coset scan finds three pieces", [] {
    auto rs = group("F4");
    int n = 0;
    for (const auto& c : scan_cosets(rs->parse_element("1 2 3 2 3 4"), rs->parse_set("2 3")))
      n += c.report.verdict == Verdict::NonEmpty;
    return n == 3;
  });
  check("F4 pipeline matches its golden table", [&] {
    PipelineOptions o;
    o.data_dir = g.data_dir();
    return run_pipeline("f4_phi8", o).exit_code == 0;
  });
  check("F4 Brauer tree labels", [&] {
    auto b = load_tree_bundle(g.data_dir() + "/trees/f4_phi8.json", g.data_dir());
    auto c = compare_labels(b.tree, j_invariants(b.table, b.umap));
    return validate_tree(b.tree, b.block, b.charset).ok && c.mismatches.empty() && c.compared == 8;
  });
  check("A2 oracle agrees with pieces", [] { return cross_validate(3, 2, 2).hard.empty(); });
  emit(g, {{"checks", checks}, {"ok", all}});
  return all ? 0 : 1;
}

std::map<std::string, bool> parse_flag_overrides(const std::vector<std::string>& set, bool none,
                                                 const std::string& scenario, const Globals& g) {
  std::map<std::string, bool> flags;
  if (!none) {
    json sc = read_json(resolve_scenario(scenario, g.data_dir()));
    const json own = sc.value("flags", json::object());
    for (const auto& [k, v] : own.items()) flags[k] = v.get<bool>();
  }
  for (const auto& s : set) {
    auto eq = s.find('=');
    std::string name = s.substr(0, eq);
    std::string val = eq == std::string::npos ? "on" : s.substr(eq + 1);
    if (val != "on" && val != "off") throw UsageError("flag value must be on or off: " + s);
    flags[name] = val == "on";
  }
  return flags;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cohomology bookkeeping for Deligne-Lusztig varieties of regular elements"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--pretty", g.pretty, "Human-readable output");
  app.add_option("--data", g.data, "Data directory (default: $DLCOHO_DATA or the source tree's data/)");
  app.add_option("--jobs", g.jobs, "Worker threads for coset scans")->check(CLI::PositiveNumber);

  // root-of-pi
  auto* rop = app.add_subcommand("root-of-pi", "Is w a d-th root of the full twist?");
  std::string rop_group, rop_w;
  int rop_d = 0;
  rop->add_option("--group", rop_group, "Type, e.g. F4")->required();
  rop->add_option("--w", rop_w, "Word, e.g. \"1 2 3 2 3 4\"")->required();
  rop->add_option("--d", rop_d, "Root degree")->required()->check(CLI::PositiveNumber);

  // pieces
  auto* pcs = app.add_subcommand("pieces", "Non-empty pieces of X(w) over the cosets W_I x");
  std::string pc_group, pc_w, pc_I, pc_x;
  bool pc_enum = false;
  pcs->add_option("--group", pc_group)->required();
  pcs->add_option("--w", pc_w)->required();
  pcs->add_option("--I", pc_I, "Parabolic subset, e.g. \"2 3\"")->required();
  pcs->add_option("--x", pc_x, "Single coset representative (default: scan all)");
  pcs->add_flag("--enumerate", pc_enum, "Decide by enumerating W_I x instead of the subexpression test");

  // klrs
  auto* kl = app.add_subcommand("klrs", "Kazhdan-Lusztig polynomials and rational smoothness");
  std::string kl_group, kl_w, kl_x;
  kl->add_option("--group", kl_group)->required();
  kl->add_option("--w", kl_w)->required();
  kl->add_option("--x", kl_x, "Print P_{x,w} instead of the smoothness report");

  // solve
  auto* sv = app.add_subcommand("solve", "Solve one long exact sequence triangle described in JSON");
  std::string sv_file;
  sv->add_option("file", sv_file)->required();

  // brauer
  auto* br = app.add_subcommand("brauer", "Validate and render a Brauer tree");
  std::string br_tree, br_render;
  bool br_validate = false;
  br->add_option("--tree", br_tree, "Tree file")->required();
  br->add_flag("--validate", br_validate, "Exit 1 unless the tree is valid and its labels match");
  br->add_option("--render", br_render, "dot or ascii");

  // oracle
  auto* orc = app.add_subcommand("oracle", "Count points of pieces in type A over finite fields");
  int or_n = 3, or_q = 2, or_m = 1;
  std::string or_w, or_I, or_x;
  bool or_cross = false;
  long long or_guard = kFlagGuard;
  orc->add_option("--n", or_n, "Matrix size")->check(CLI::Range(2, 6));
  orc->add_option("--q", or_q, "Base field order");
  orc->add_option("--m", or_m, "Extension degree (largest degree with --cross)");
  orc->add_option("--w", or_w);
  orc->add_option("--I", or_I);
  orc->add_option("--x", or_x);
  orc->add_option("--guard", or_guard, "Largest flag count to enumerate");
  orc->add_flag("--cross", or_cross, "Compare every piece against the non-emptiness test");

  // pipeline
  auto* pl = app.add_subcommand("pipeline", "Run a reproduction scenario end to end");
  std::string pl_scenario;
  std::vector<std::string> pl_flags;
  bool pl_no_flags = false, pl_summary = false;
  pl->add_option("scenario", pl_scenario, "Scenario name or path")->required();
  pl->add_option("--flag", pl_flags, "name=on|off, overrides the scenario's assumption flags");
  pl->add_flag("--no-flags", pl_no_flags, "Start from no assumptions");
  pl->add_flag("--summary", pl_summary, "Print only the stage verdicts");

  app.add_subcommand("selftest", "Quick checks on small inputs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*rop) {
      emit(g, root_of_pi_json(group(rop_group)->parse_element(rop_w), rop_d));
      return 0;
    }
    if (*pcs) {
      auto rs = group(pc_group);
      WeylElt w = rs->parse_element(pc_w);
      NodeSet I = rs->parse_set(pc_I);
      json out = {{"group", pc_group}, {"w", w.to_string()}, {"I", rs->format_set(I)}};
      if (!pc_x.empty()) {
        WeylElt x = rs->parse_element(pc_x);
        out["x"] = x.to_string();
        out["report"] = report_json(pc_enum ? piece_nonempty_r1_enumerate(w, I, x) : piece_nonempty_r1(w, I, x));
      } else {
        json cs = json::array();
        int nonempty = 0;
        for (const auto& c : scan_cosets(w, I, g.jobs, pc_enum)) {
          cs.push_back({{"x", c.x.to_string()}, {"report", report_json(c.report)}});
          nonempty += c.report.verdict == Verdict::NonEmpty;
        }
        out["cosets"] = cs;
        out["nonempty"] = nonempty;
      }
      emit(g, out);
      return 0;
    }
    if (*kl) {
      auto rs = group(kl_group);
      WeylElt w = rs->parse_element(kl_w);
      if (!kl_x.empty()) {
        WeylElt x = rs->parse_element(kl_x);
        emit(g, {{"x", x.to_string()}, {"w", w.to_string()}, {"P", poly_string(kl_polynomial(x, w))}});
      } else {
        auto r = rational_smoothness(w);
        json wit = json::array();
        for (const auto& [v, p] : r.witnesses) wit.push_back({{"v", v.to_string()}, {"P", poly_string(p)}});
        emit(g, {{"w", w.to_string()},
                 {"rationally_smooth", r.smooth},
                 {"palindromic_poincare", r.palindromic},
                 {"poincare", poly_string(poincare_poly(w))},
                 {"witnesses", wit}});
      }
      return 0;
    }
    if (*sv) {
      emit(g, solve_file(sv_file, g.data_dir()));
      return 0;
    }
    if (*br) {
      auto b = load_tree_bundle(br_tree, g.data_dir());
      if (!br_render.empty()) {
        std::cout << render(b.tree, parse_render_format(br_render));
        return 0;
      }
      json out = brauer_json(b);
      emit(g, out);
      if (br_validate && !(out["valid"].get<bool>() && out["label_mismatches"].empty())) return 1;
      return 0;
    }
    if (*orc) {
      if (or_cross) {
        auto r = cross_validate(or_n, or_q, or_m, or_guard);
        auto an = group("A" + std::to_string(or_n - 1));
        auto cases = [&](const std::vector<CrossCase>& v) {
          json a = json::array();
          for (const auto& c : v) {
            json pts = json::object();
            for (const auto& [m, n] : c.points) pts[std::to_string(m)] = n;
            a.push_back({{"w", c.w.to_string()}, {"I", an->format_set(c.I)}, {"x", c.x.to_string()}, {"points", pts}});
          }
          return a;
        };
        emit(g, {{"n", r.n},
                 {"q", r.q},
                 {"degrees_run", r.degrees_run},
                 {"degrees_skipped", r.degrees_skipped},
                 {"cases", r.cases},
                 {"hard_discrepancies", cases(r.hard)},
                 {"flagged", cases(r.flagged)}});
        return r.hard.empty() ? 0 : 1;
      }
      auto an = group("A" + std::to_string(or_n - 1));
      WeylElt w = an->parse_element(or_w.empty() ? "e" : or_w);
      NodeSet I = or_I.empty() ? 0 : an->parse_set(or_I);
      WeylElt x = min_coset_rep(an->parse_element(or_x.empty() ? "e" : or_x), I);
      long long count = dl_piece_points(w, I, x, or_q, or_m, or_guard);
      emit(g, {{"n", or_n}, {"q", or_q}, {"m", or_m}, {"w", w.to_string()}, {"I", an->format_set(I)},
               {"x", x.to_string()}, {"count", count}, {"nonempty", count > 0}});
      return 0;
    }
    if (*pl) {
      PipelineOptions o;
      o.data_dir = g.data_dir();
      o.jobs = g.jobs;
      if (pl_no_flags || !pl_flags.empty()) o.flags = parse_flag_overrides(pl_flags, pl_no_flags, pl_scenario, g);
      auto r = run_pipeline(pl_scenario, o);
      if (g.pretty)
        print_pipeline_pretty(r);
      else
        std::cout << (pl_summary ? pipeline_summary(r) : r.report).dump() << "\n";
      return r.exit_code;
    }
    return selftest(g);
  } catch (const ContradictionError& e) {
    std::cerr << "contradiction: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed data: " << e.what() << "\n";
    return 3;
  }
}
