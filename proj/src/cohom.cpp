#include "dlcoho/cohom.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <nlohmann/json.hpp>
#include <regex>
#include <set>
#include <sstream>

#include "dlcoho/error.hpp"

namespace dlcoho {

using json = nlohmann::json;

namespace {

const std::vector<std::pair<int, std::string>> kUnityNames = {
    {0, "1"},   {30, "-1"}, {15, "i"},  {45, "-i"}, {20, "θ"},  {40, "θ²"},
    {50, "-θ"}, {10, "-θ²"}, {12, "ζ"}, {24, "ζ²"}, {36, "ζ³"}, {48, "ζ⁴"},
};

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
  return s;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string require_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) throw ConfigError(where + ": missing string field '" + key + "'");
  return j[key].get<std::string>();
}

}  // namespace

Unity Unity::from_exponent(int k) {
  Unity u;
  u.k_ = ((k % 60) + 60) % 60;
  return u;
}

Unity Unity::parse(const std::string& raw) {
  std::string s = raw;
  s = replace_all(s, "theta", "θ");
  s = replace_all(s, "zeta", "ζ");
  s = replace_all(s, "^2", "²");
  s = replace_all(s, "^3", "³");
  s = replace_all(s, "^4", "⁴");
  if (s == "θ¹" || s == "ζ¹") s = s.substr(0, s.size() - 2);
  for (const auto& [k, name] : kUnityNames)
    if (name == s) return from_exponent(k);
  if (s.rfind("z60^", 0) == 0) {
    try {
      return from_exponent(std::stoi(s.substr(4)));
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("unknown root of unity '" + raw + "'");
}

int Unity::order() const {
  int g = std::gcd(k_, 60);
  return 60 / g;
}

std::string Unity::label() const {
  for (const auto& [k, name] : kUnityNames)
    if (k == k_) return name;
  return "z60^" + std::to_string(k_);
}

// ---------------------------------------------------------------------------

CohPoly CohPoly::unit() { return monomial(0, 0); }

CohPoly CohPoly::monomial(int h, int t2, long long mult) {
  CohPoly p;
  p.add_term({h, t2}, {kUnitChar, Unity()}, mult);
  return p;
}

CohPoly CohPoly::gm_factor() { return monomial(1, 0) + monomial(2, 2); }

CohPoly CohPoly::ga_factor() { return monomial(2, 2); }

bool CohPoly::is_scalar() const { return group_.empty(); }

void CohPoly::add_term(Grade g, const Term& t, long long mult) {
  if (g.h < 0 || g.t2 < 0) throw UsageError("negative grade");
  if (mult < 0) throw UsageError("negative multiplicity");
  if (mult == 0) return;
  data_[g][t] += mult;
}

long long CohPoly::coeff(Grade g, const std::string& chr, std::optional<Unity> u) const {
  auto it = data_.find(g);
  if (it == data_.end()) return 0;
  long long s = 0;
  for (const auto& [t, m] : it->second)
    if (t.chr == chr && (!u || t.unity == *u)) s += m;
  return s;
}

long long CohPoly::total_mult() const {
  long long s = 0;
  for (const auto& [g, c] : data_)
    for (const auto& [t, m] : c) s += m;
  return s;
}

std::optional<int> CohPoly::min_h() const {
  if (data_.empty()) return std::nullopt;
  int m = data_.begin()->first.h;
  for (const auto& [g, c] : data_) m = std::min(m, g.h);
  return m;
}

std::optional<int> CohPoly::max_h() const {
  if (data_.empty()) return std::nullopt;
  int m = 0;
  for (const auto& [g, c] : data_) m = std::max(m, g.h);
  return m;
}

CohPoly CohPoly::operator+(const CohPoly& o) const {
  if (empty()) return o;
  if (o.empty()) return *this;
  if (group_ != o.group_)
    throw UsageError("cannot add polynomials over groups '" + group_ + "' and '" + o.group_ + "'");
  CohPoly r = *this;
  for (const auto& [g, c] : o.data_)
    for (const auto& [t, m] : c) r.add_term(g, t, m);
  return r;
}

CohPoly CohPoly::operator*(const CohPoly& o) const {
  if (!is_scalar() && !o.is_scalar())
    throw UsageError("Kunneth product needs a scalar factor (groups '" + group_ + "' and '" + o.group_ + "')");
  const CohPoly& s = is_scalar() ? *this : o;
  const CohPoly& p = is_scalar() ? o : *this;
  CohPoly r(p.group_);
  for (const auto& [g1, c1] : s.data_)
    for (const auto& [t1, m1] : c1)
      for (const auto& [g2, c2] : p.data_)
        for (const auto& [t2, m2] : c2) {
          Term t = t2;
          t.unity = t2.unity * t1.unity;
          r.add_term({g1.h + g2.h, g1.t2 + g2.t2}, t, m1 * m2);
        }
  return r;
}

bool CohPoly::operator==(const CohPoly& o) const {
  if (empty() && o.empty()) return true;
  return group_ == o.group_ && data_ == o.data_;
}

namespace {

std::string grade_prefix(Grade g) {
  std::string s;
  if (g.h > 0) s += g.h == 1 ? "h" : "h^" + std::to_string(g.h);
  if (g.t2 > 0) {
    if (!s.empty()) s += " ";
    if (g.t2 == 2) s += "t";
    else if (g.t2 % 2 == 0) s += "t^" + std::to_string(g.t2 / 2);
    else s += "t^" + std::to_string(g.t2) + "/2";
  }
  return s;
}

std::string term_string(const Term& t, long long m, bool scalar) {
  std::string s;
  if (m != 1 || (scalar && t.chr == kUnitChar)) s = std::to_string(m);
  if (!(scalar && t.chr == kUnitChar)) {
    if (!s.empty()) s += " ";
    s += t.chr;
  }
  if (t.unity != Unity() && !scalar) s += "@" + t.unity.label();
  return s;
}

}  // namespace

std::string CohPoly::to_string() const {
  if (data_.empty()) return "0";
  std::string out;
  for (const auto& [g, c] : data_) {
    if (!out.empty()) out += " + ";
    std::string pre = grade_prefix(g);
    bool scalar = is_scalar();
    if (c.size() == 1) {
      const auto& [t, m] = *c.begin();
      std::vector<std::string> parts;
      if (m != 1 || (pre.empty() && scalar)) parts.push_back(std::to_string(m));
      if (!pre.empty()) parts.push_back(pre);
      std::string label = term_string(t, 1, scalar);
      if (!(scalar && t.chr == kUnitChar)) parts.push_back(label);
      for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " " : "") + parts[i];
    } else {
      std::string inner;
      for (const auto& [t, m] : c) {
        if (!inner.empty()) inner += " + ";
        inner += term_string(t, m, scalar);
      }
      out += pre.empty() ? "(" + inner + ")" : pre + " (" + inner + ")";
    }
  }
  return out;
}

CohPoly add(const CohPoly& p, const CohPoly& q) { return p + q; }
CohPoly mul(const CohPoly& p, const CohPoly& q) { return p * q; }

CohPoly shift(const CohPoly& p, int dh, int dt2) {
  CohPoly r(p.group());
  for (const auto& [g, c] : p.data()) {
    Grade ng{g.h + dh, g.t2 + dt2};
    if (ng.h < 0 || ng.t2 < 0) throw UsageError("shift leaves the nonnegative grades");
    for (const auto& [t, m] : c) r.add_term(ng, t, m);
  }
  return r;
}

CohPoly scale(const CohPoly& p, Unity u) {
  CohPoly r(p.group());
  for (const auto& [g, c] : p.data())
    for (const auto& [t, m] : c) r.add_term(g, {t.chr, t.unity * u}, m);
  return r;
}

CohPoly times(const CohPoly& p, long long n) {
  if (n < 0) throw UsageError("negative multiple");
  CohPoly r(p.group());
  for (const auto& [g, c] : p.data())
    for (const auto& [t, m] : c) r.add_term(g, t, m * n);
  return r;
}

CohPoly power(const CohPoly& p, int n) {
  if (n < 0) throw UsageError("negative power");
  CohPoly r = CohPoly::unit();
  for (int i = 0; i < n; ++i) r = r * p;
  return r;
}

CohPoly gm_ga_product(int d, int e, const CohPoly& base) {
  if (d < 0 || e < 0) throw UsageError("negative G_m or G_a count");
  return power(CohPoly::gm_factor(), d) * shift(base, 2 * e, 2 * e);
}

CohPoly coxeter_quotient(int dropped_nodes, const CohPoly& levi_coxeter) {
  return power(CohPoly::gm_factor(), dropped_nodes) * levi_coxeter;
}

CohPoly isotypic_slice(const CohPoly& p, const std::string& chr, std::optional<Unity> u) {
  CohPoly r(p.group());
  for (const auto& [g, c] : p.data())
    for (const auto& [t, m] : c)
      if (t.chr == chr && (!u || t.unity == *u)) r.add_term(g, t, m);
  return r;
}

json to_json(const CohPoly& p) {
  json arr = json::array();
  for (const auto& [g, c] : p.data()) {
    json terms = json::array();
    for (const auto& [t, m] : c)
      terms.push_back(json{{"char", t.chr}, {"unity", t.unity.label()}, {"mult", m}});
    arr.push_back(json{{"h", g.h}, {"t2", g.t2}, {"terms", terms}});
  }
  return arr;
}

CohPoly poly_from_json(const json& j, const std::string& group) {
  if (!j.is_array()) throw ConfigError("polynomial must be a JSON array");
  CohPoly p(group);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    std::string at = "grade entry " + std::to_string(i);
    if (!e.contains("h") || !e["h"].is_number_integer() || !e.contains("t2") || !e["t2"].is_number_integer())
      throw ConfigError(at + ": malformed grade");
    int h = e["h"].get<int>(), t2 = e["t2"].get<int>();
    if (h < 0 || t2 < 0) throw ConfigError(at + ": malformed grade");
    if (!e.contains("terms") || !e["terms"].is_array()) throw ConfigError(at + ": missing terms");
    for (const auto& t : e["terms"]) {
      long long m = t.value("mult", 0LL);
      if (m <= 0) throw ConfigError(at + ": multiplicity must be positive");
      p.add_term({h, t2}, {require_string(t, "char", at), Unity::parse(t.value("unity", std::string("1")))}, m);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------

CharSet::CharSet(std::string group, std::vector<CharInfo> chars) : group_(std::move(group)), chars_(std::move(chars)) {
  for (std::size_t i = 0; i < chars_.size(); ++i)
    if (!index_.emplace(chars_[i].name, i).second)
      throw ConfigError(group_ + ": duplicate character '" + chars_[i].name + "'");
}

const CharInfo* CharSet::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &chars_[it->second];
}

const CharInfo& CharSet::at(const std::string& name) const {
  if (auto* c = find(name)) return *c;
  throw ConfigError(group_ + ": unknown character '" + name + "'");
}

std::string CharSet::support(const std::string& name) const {
  const CharInfo& c = at(name);
  switch (c.kind) {
    case SeriesKind::Principal: return "1";
    case SeriesKind::Cuspidal: return c.name;
    case SeriesKind::HarishChandra: return c.cuspidal;
  }
  return "";
}

CharSet charset_from_json(const json& j, const std::string& where) {
  std::string group = require_string(j, "group", where);
  if (!j.contains("characters") || !j["characters"].is_array()) throw ConfigError(where + ": missing characters");
  std::vector<CharInfo> out;
  for (const auto& c : j["characters"]) {
    CharInfo ci;
    ci.name = require_string(c, "name", where);
    std::string series = c.value("series", std::string("principal"));
    if (series == "principal") ci.kind = SeriesKind::Principal;
    else if (series == "cuspidal") ci.kind = SeriesKind::Cuspidal;
    else if (series.rfind("hc:", 0) == 0) {
      ci.kind = SeriesKind::HarishChandra;
      ci.cuspidal = series.substr(3);
    } else
      throw ConfigError(where + ": bad series '" + series + "' for " + ci.name);
    ci.unity = Unity::parse(c.value("unity", std::string("1")));
    ci.dim = c.value("dim", 1);
    ci.coxeter = c.value("coxeter", false);
    out.push_back(ci);
  }
  return CharSet(group, out);
}

CharSet load_charset(const std::string& path) { return charset_from_json(read_json_file(path), path); }

namespace {

std::vector<std::string> tokenize(const std::string& expr) {
  std::vector<std::string> raw, out;
  std::istringstream in(std::regex_replace(expr, std::regex("\\)\\^"), ") ^"));
  for (std::string tok; in >> tok;) raw.push_back(tok);
  for (auto tok : raw) {
    std::vector<std::string> tail;
    while (!tok.empty() && tok.front() == '(') {
      out.push_back("(");
      tok.erase(0, 1);
    }
    // A closing parenthesis belongs to the label only if it opened inside it.
    while (!tok.empty() && tok.back() == ')' &&
           std::count(tok.begin(), tok.end(), '(') < std::count(tok.begin(), tok.end(), ')')) {
      tail.push_back(")");
      tok.pop_back();
    }
    if (!tok.empty()) out.push_back(tok);
    out.insert(out.end(), tail.begin(), tail.end());
  }
  return out;
}

struct ExprParser {
  std::vector<std::string> toks;
  std::size_t pos = 0;
  const CharSet* cs;
  bool graded;
  std::string expr;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("cannot parse '" + expr + "': " + msg + " near token " + std::to_string(pos));
  }

  bool at_end() const { return pos >= toks.size(); }
  const std::string& peek() const { return toks[pos]; }

  CohPoly term() {
    static const std::regex int_re("[0-9]+"), h_re("h(\\^([0-9]+))?"), t_re("t(\\^([0-9]+)(/2)?)?"),
        pow_re("\\^([0-9]+)");
    long long coef = 1;
    int h = 0, t2 = 0;
    std::vector<CohPoly> factors;
    std::smatch m;
    while (!at_end() && peek() != "+" && peek() != ")") {
      const std::string& tok = peek();
      if (std::regex_match(tok, int_re)) {
        coef *= std::stoll(tok);
        ++pos;
      } else if (graded && std::regex_match(tok, m, h_re)) {
        h += m[2].matched ? std::stoi(m[2]) : 1;
        ++pos;
      } else if (graded && std::regex_match(tok, m, t_re)) {
        int e = m[2].matched ? std::stoi(m[2]) : 1;
        t2 += m[3].matched ? e : 2 * e;
        ++pos;
      } else if (tok == "(") {
        ++pos;
        CohPoly inner = sum();
        if (at_end() || peek() != ")") fail("unbalanced parenthesis");
        ++pos;
        if (!at_end() && std::regex_match(peek(), m, pow_re)) {
          inner = power(inner, std::stoi(m[1]));
          ++pos;
        }
        factors.push_back(std::move(inner));
      } else {
        std::string label = toks[pos++];
        std::optional<Unity> u;
        if (auto at = label.rfind('@'); at != std::string::npos) {
          u = Unity::parse(label.substr(at + 1));
          label = label.substr(0, at);
        }
        if (cs->group().empty()) fail("scalar expression with label '" + label + "'");
        const CharInfo& ci = cs->at(label);
        CohPoly atom(cs->group());
        atom.add_term({0, 0}, {label, u.value_or(ci.unity)}, 1);
        factors.push_back(std::move(atom));
      }
    }
    CohPoly r = CohPoly::monomial(h, t2, coef);
    try {
      for (const auto& f : factors) r = r * f;
    } catch (const UsageError&) {
      fail("product of two character labels");
    }
    return r;
  }

  CohPoly sum() {
    CohPoly r = term();
    while (!at_end() && peek() == "+") {
      ++pos;
      CohPoly t = term();
      if (!r.empty() && !t.empty() && r.is_scalar() != t.is_scalar()) fail("sum of a scalar and a character term");
      r = r + t;
    }
    return r;
  }
};

}  // namespace

CohPoly parse_poly(const std::string& expr, const CharSet& cs) {
  ExprParser p{tokenize(expr), 0, &cs, true, expr};
  if (p.toks.empty()) return CohPoly(cs.group());
  CohPoly r = p.sum();
  if (!p.at_end()) p.fail("trailing input");
  if (!cs.group().empty() && !r.empty() && r.is_scalar()) p.fail("missing character label");
  return r;
}

std::map<std::string, long long> parse_combination(const std::string& expr, const CharSet& cs) {
  ExprParser p{tokenize(expr), 0, &cs, false, expr};
  std::map<std::string, long long> out;
  if (p.toks.empty()) return out;
  CohPoly r = p.sum();
  if (!p.at_end()) p.fail("trailing input");
  if (!r.empty() && r.is_scalar()) p.fail("missing character label");
  for (const auto& [g, c] : r.data())
    for (const auto& [t, m] : c) out[t.chr] += m;
  return out;
}

void validate_poly(const CohPoly& p, const CharSet& cs) {
  if (p.empty()) return;
  if (p.group() != cs.group())
    throw ConfigError("polynomial over '" + p.group() + "' checked against charset '" + cs.group() + "'");
  for (const auto& [g, c] : p.data())
    for (const auto& [t, m] : c) cs.at(t.chr);
}

CohPoly filter_support(const CohPoly& p, const CharSet& cs, const std::string& support) {
  CohPoly r(p.group());
  for (const auto& [g, c] : p.data())
    for (const auto& [t, m] : c)
      if (cs.support(t.chr) == support) r.add_term(g, t, m);
  return r;
}

RestrictionTable restriction_from_json(const json& j, const CharSet& g, const CharSet& l, const std::string& where) {
  RestrictionTable rt;
  rt.group = require_string(j, "group", where);
  rt.levi = require_string(j, "levi", where);
  if (rt.group != g.group() || rt.levi != l.group()) throw ConfigError(where + ": group tags do not match charsets");
  if (!j.contains("entries") || !j["entries"].is_array()) throw ConfigError(where + ": missing entries");
  for (const auto& e : j["entries"]) {
    std::string chr = require_string(e, "char", where);
    std::string at = where + " [" + chr + "]";
    std::string src = e.value("source", std::string());
    if (src.empty()) throw ConfigError(at + ": restriction entry without provenance");
    const CharInfo& gi = g.at(chr);
    auto comb = parse_combination(require_string(e, "restriction", at), l);
    long long dim = 0;
    for (const auto& [lc, m] : comb) {
      if (l.support(lc) != g.support(chr))
        throw ConfigError(at + ": restriction leaves the Harish-Chandra series (" + lc + ")");
      dim += m * l.at(lc).dim;
    }
    if (dim != gi.dim)
      throw ConfigError(at + ": restricted dimension " + std::to_string(dim) + " != " + std::to_string(gi.dim));
    rt.entries[chr] = comb;
    rt.sources[chr] = src;
  }
  return rt;
}

RestrictionTable load_restriction(const std::string& path, const CharSet& g, const CharSet& l) {
  return restriction_from_json(read_json_file(path), g, l, path);
}

Block block_from_json(const json& j, const CharSet& cs, const std::string& where) {
  Block b;
  b.group = require_string(j, "group", where);
  if (b.group != cs.group()) throw ConfigError(where + ": block group does not match charset");
  b.d = j.value("d", 0);
  if (!j.contains("members") || !j["members"].is_array()) throw ConfigError(where + ": missing members");
  std::set<std::string> seen;
  for (const auto& m : j["members"]) {
    std::string name = m.get<std::string>();
    cs.at(name);
    if (!seen.insert(name).second) throw ConfigError(where + ": duplicate block member " + name);
    b.members.push_back(name);
  }
  return b;
}

Block load_block(const std::string& path, const CharSet& cs) { return block_from_json(read_json_file(path), cs, path); }

TableFile table_from_json(const json& j, const CharSet& cs, const std::string& where) {
  TableFile t;
  t.group = require_string(j, "group", where);
  if (t.group != cs.group()) throw ConfigError(where + ": table group does not match charset");
  t.element = j.value("element", std::string());
  t.source = j.value("source", std::string());
  try {
    if (j.contains("poly")) t.poly = poly_from_json(j["poly"], t.group);
    else if (j.contains("expr")) t.poly = parse_poly(require_string(j, "expr", where), cs);
    else throw ConfigError("needs 'poly' or 'expr'");
    validate_poly(t.poly, cs);
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return t;
}

TableFile load_table(const std::string& path, const CharSet& cs) {
  return table_from_json(read_json_file(path), cs, path);
}

LiftResult hc_lift(const CohPoly& quotient, const RestrictionTable& restr, const std::vector<std::string>& block,
                   const CharSet& g) {
  LiftResult res;
  res.lifted = CohPoly(g.group());
  std::vector<std::string> members;
  for (const auto& m : block)
    if (restr.entries.count(m) && !restr.entries.at(m).empty()) members.push_back(m);
  std::set<std::string> covered;
  for (const auto& m : members)
    for (const auto& [lc, k] : restr.entries.at(m)) covered.insert(lc);

  for (const auto& [grade, coeff] : quotient.data()) {
    std::map<Unity, std::map<std::string, long long>> by_unity;
    for (const auto& [t, m] : coeff) {
      if (!covered.count(t.chr))
        throw UsageError("L-level character " + t.chr + " is not in the restriction of any block member");
      by_unity[t.unity][t.chr] += m;
    }
    for (const auto& [u, target] : by_unity) {
      std::vector<std::map<std::string, long long>> sols;
      std::map<std::string, long long> cur;
      std::map<std::string, long long> rest = target;
      std::function<void(std::size_t)> dfs = [&](std::size_t i) {
        if (sols.size() > 64) return;
        if (i == members.size()) {
          if (std::all_of(rest.begin(), rest.end(), [](const auto& kv) { return kv.second == 0; }))
            sols.push_back(cur);
          return;
        }
        const auto& r = restr.entries.at(members[i]);
        long long cap = -1;
        for (const auto& [lc, k] : r) {
          long long avail = rest.count(lc) ? rest[lc] : 0;
          long long c = avail / k;
          cap = cap < 0 ? c : std::min(cap, c);
        }
        for (long long c = cap; c >= 0; --c) {
          for (const auto& [lc, k] : r)
            if (c) rest[lc] -= c * k;
          if (c) cur[members[i]] = c;
          dfs(i + 1);
          if (c) {
            cur.erase(members[i]);
            for (const auto& [lc, k] : r) rest[lc] += c * k;
          }
        }
      };
      dfs(0);
      if (sols.empty())
        throw ContradictionError("no block combination restricts to the grade (h=" + std::to_string(grade.h) +
                                 ", t2=" + std::to_string(grade.t2) + ") coefficient");
      if (sols.size() > 1) {
        res.unique = false;
        res.ambiguities.push_back({grade, u, sols});
        continue;
      }
      for (const auto& [chr, c] : sols[0]) res.lifted.add_term(grade, {chr, u}, c);
    }
  }
  return res;
}

void resolve_by_constituents(LiftResult& res, const std::vector<std::string>& members) {
  if (res.unique) return;
  std::size_t combos = 1;
  for (const auto& a : res.ambiguities) {
    combos *= a.solutions.size();
    if (combos > 100000) return;
  }
  std::optional<CohPoly> found;
  int survivors = 0;
  std::vector<std::size_t> pick(res.ambiguities.size(), 0);
  for (std::size_t n = 0; n < combos; ++n) {
    std::size_t rem = n;
    for (std::size_t i = 0; i < pick.size(); ++i) {
      pick[i] = rem % res.ambiguities[i].solutions.size();
      rem /= res.ambiguities[i].solutions.size();
    }
    CohPoly cand = res.lifted;
    for (std::size_t i = 0; i < pick.size(); ++i) {
      const auto& a = res.ambiguities[i];
      for (const auto& [chr, c] : a.solutions[pick[i]]) cand.add_term(a.grade, {chr, a.unity}, c);
    }
    std::map<std::string, long long> euler;
    for (const auto& [g, c] : cand.data())
      for (const auto& [t, m] : c) euler[t.chr] += (g.h % 2 ? -m : m);
    bool ok = std::all_of(members.begin(), members.end(), [&](const auto& m) { return euler[m] != 0; });
    if (ok && ++survivors == 1) found = cand;
  }
  if (survivors != 1) return;
  res.lifted = *found;
  res.unique = true;
  res.resolved_by_constituents = true;
  res.ambiguities.clear();
}

}  // namespace dlcoho
