#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "dlcoho/error.hpp"
#include "dlcoho/sequences.hpp"

using namespace dlcoho;

namespace {

std::string data(const std::string& rel) { return std::string(DLCOHO_DEFAULT_DATA) + "/" + rel; }

// Every exact sequence 0 -> a_1 -> ... -> a_k -> 0 with entries <= cap, built
// from its rank vector.
std::set<std::vector<long long>> exact_sequences(int k, long long cap) {
  std::set<std::vector<long long>> out;
  std::vector<long long> r(k + 1, 0);  // r[0] = r[k] = 0
  std::function<void(int)> rec = [&](int i) {
    if (i == k) {
      std::vector<long long> a(k);
      for (int j = 0; j < k; ++j) a[j] = r[j] + r[j + 1];
      if (std::all_of(a.begin(), a.end(), [&](long long x) { return x <= cap; })) out.insert(a);
      return;
    }
    for (long long v = 0; v <= cap; ++v) {
      r[i] = v;
      rec(i + 1);
    }
    r[i] = 0;
  };
  if (k == 1) out.insert({0});
  else rec(1);
  return out;
}

bool flat_exact(const std::array<Profile, 3>& sol) {
  int lo = 1 << 20, hi = -1;
  for (const auto& p : sol)
    for (const auto& [h, m] : p) lo = std::min(lo, h), hi = std::max(hi, h);
  if (hi < 0) return true;
  std::vector<std::optional<long long>> seq;
  for (int h = lo; h <= hi; ++h)
    for (const auto& p : sol) {
      auto it = p.find(h);
      seq.push_back(it == p.end() ? 0 : it->second);
    }
  return feasible_dims(seq).feasible;
}

struct F4Quotient {
  CharSet b2 = load_charset(data("charsets/b2.json"));
  CohPoly open = gm_ga_product(2, 0, load_table(data("tables/b2_w0.json"), b2).poly);
  CohPoly closed = times(gm_ga_product(1, 1, coxeter_quotient(1, load_table(data("tables/b2_coxeter.json"), b2).poly)), 2);
};

}  // namespace

TEST(Feasibility, MatchesRankEnumerationExhaustively) {
  for (int k = 1; k <= 6; ++k) {
    auto good = exact_sequences(k, 5);
    std::vector<std::optional<long long>> seq(k, 0);
    std::function<void(int)> rec = [&](int i) {
      if (i == k) {
        std::vector<long long> a(k);
        for (int j = 0; j < k; ++j) a[j] = *seq[j];
        auto f = feasible_dims(seq);
        ASSERT_EQ(f.feasible, good.count(a) == 1);
        if (f.feasible) {
          for (int j = 0; j < k; ++j) EXPECT_EQ(a[j], (j ? f.ranks[j - 1] : 0) + f.ranks[j]);
          EXPECT_EQ(f.ranks.back(), 0);
        }
        return;
      }
      for (long long v = 0; v <= 5; ++v) {
        seq[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  }
}

TEST(Feasibility, UnknownEntriesMatchCompletions) {
  for (int k = 1; k <= 4; ++k) {
    auto good = exact_sequences(k, 10);
    std::vector<std::optional<long long>> seq(k);
    std::function<void(int)> rec = [&](int i) {
      if (i == k) {
        bool any = false;
        for (const auto& a : good) {
          bool match = true;
          for (int j = 0; j < k; ++j) match &= !seq[j] || *seq[j] == a[j];
          any |= match;
        }
        auto f = feasible_dims(seq);
        EXPECT_EQ(f.feasible, any);
        if (f.feasible)
          for (int j = 0; j < k; ++j)
            if (seq[j]) EXPECT_EQ(f.values[j], *seq[j]);
        return;
      }
      seq[i] = std::nullopt;
      rec(i + 1);
      for (long long v = 0; v <= 3; ++v) {
        seq[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  }
}

TEST(Feasibility, SmallCases) {
  EXPECT_TRUE(feasible_dims({2, 2}).feasible);
  EXPECT_FALSE(feasible_dims({2, 3}).feasible);
  // 0 -> 3 -> 4 -> x -> 0: the rank enumeration leaves x = 1 only.
  std::set<long long> xs;
  for (const auto& a : exact_sequences(3, 8))
    if (a[0] == 3 && a[1] == 4) xs.insert(a[2]);
  EXPECT_EQ(xs, std::set<long long>{1});
  auto f = feasible_dims({3, 4, std::nullopt});
  ASSERT_TRUE(f.feasible);
  EXPECT_EQ(f.values[2], 1);
  // 0 -> H^8 -> 3 -> 4 -> H^9 -> 0 with H^8 = 0.
  auto g = feasible_dims({0, 3, 4, std::nullopt});
  ASSERT_TRUE(g.feasible);
  EXPECT_EQ(g.values[3], 1);
}

TEST(Triangle, ClosedZeroGivesOpen) {
  CharSet b2 = load_charset(data("charsets/b2.json"));
  CohPoly open = parse_poly("h^4 St + h^5 t^2 (ρ_{θ} + 2 θ_{10}) + h^8 t^4 Id", b2);
  Triangle tri{"closed-zero", {family_of(open), std::nullopt, Family{}}};
  auto sol = solve_triangle(tri, {}, b2);
  EXPECT_TRUE(sol.unique());
  EXPECT_EQ(sol.value(Obj::Total, "B2"), open);
}

TEST(Triangle, CuspidalSliceWithCoxeterExclusion) {
  // 0 -> H^8 -> 3 -> 4 -> H^9 -> 0 read as open X(w) (unknown), total, closed.
  CharSet e6 = load_charset(data("charsets/e6.json"));
  CohPoly total = parse_poly("3 h^8 t^4 E6[θ]", e6);
  CohPoly closed = parse_poly("4 h^8 t^4 E6[θ]", e6);
  Triangle tri{"e6-cusp", {std::nullopt, family_of(total), family_of(closed)}};
  Rule c4{RuleKind::EigenvalueExclude, Obj::Open, 0, 0, "@coxeter", {{8, 8}}, 0, 0, "coxeter exclusion"};
  Rule win{RuleKind::VanishWindow, Obj::Open, 8, 16, "", {}, 0, 0, "degree window"};
  auto sol = solve_triangle(tri, {c4, win}, e6);
  ASSERT_TRUE(sol.unique());
  EXPECT_EQ(sol.value(Obj::Open, "E6"), parse_poly("h^9 t^4 E6[θ]", e6));
  auto loose = solve_triangle(tri, {win}, e6);
  EXPECT_FALSE(loose.unique());
}

TEST(Triangle, F4StAndIdSlices) {
  F4Quotient q;
  Triangle tri{"f4-quotient", {family_of(q.open), std::nullopt, family_of(q.closed)}};
  auto first = solve_triangle(tri, {}, q.b2);
  CohPoly others(q.b2.group());
  for (const auto& s : first.slices) {
    if (s.key.chr == "St" || s.key.chr == "Id" || q.b2.support(s.key.chr) != "1") continue;
    auto one = TriangleSolution{"", {s}};
    others = others + one.value(Obj::Total, "B2");
  }
  EXPECT_EQ(others, parse_poly("h^7 t^2 (ρ_{θ} + ρ_{θε} + 2 ρ_{r}) + h^8 t^3 (2 ρ_{θ} + 2 ρ_{θε} + 4 ρ_{r})"
                               " + h^9 t^4 (ρ_{θ} + ρ_{θε} + 2 ρ_{r})",
                               q.b2));
  auto rules = derive_st_id_placements(others, q.b2, {{6, 0}}, {{12, 12}}, "St/Id placement");
  ASSERT_EQ(rules.size(), 2u);
  EXPECT_EQ(rules[0].cells, (std::vector<Grade>{{6, 0}, {7, 4}, {8, 6}, {9, 8}}));
  auto sol = solve_triangle(tri, rules, q.b2);
  CohPoly total_st(q.b2.group());
  for (const auto& s : sol.slices)
    if (s.key.chr == "St" || s.key.chr == "Id") total_st = total_st + TriangleSolution{"", {s}}.value(Obj::Total, "B2");
  EXPECT_EQ(total_st, parse_poly("h^6 St + 3 h^7 t^2 St + h^8 t^3 (2 St + 2 Id) + 3 h^9 t^4 Id + h^12 t^6 Id", q.b2));
  // Without the placement data the St and Id slices stay open.
  bool st_ambiguous = false;
  for (const auto& s : first.slices)
    if (s.key.chr == "St" && TriangleSolution{"", {s}}.ambiguity_report(Obj::Total).size()) st_ambiguous = true;
  EXPECT_TRUE(st_ambiguous);
}

TEST(Triangle, F4Theta10IsAmbiguous) {
  F4Quotient q;
  Triangle tri{"f4-quotient", {family_of(q.open), std::nullopt, family_of(q.closed)}};
  auto sol = solve_triangle(tri, {}, q.b2);
  std::vector<std::string> reports;
  for (const auto& s : sol.slices)
    if (s.key.chr == "θ_{10}")
      for (const auto& line : TriangleSolution{"", {s}}.ambiguity_report(Obj::Total)) reports.push_back(line);
  // Each of the t^2, t^3, t^4 slices keeps a free boundary rank.
  EXPECT_EQ(reports.size(), 3u);
  for (const auto& s : sol.slices)
    if (s.key.chr == "θ_{10}" && s.key.t2 == 4) {
      EXPECT_EQ(s.solutions.size(), 3u);
      for (const auto& x : s.solutions) {
        auto t = x[1];
        EXPECT_EQ(t[6], t[7]);
        EXPECT_LE(t[6], 2);
      }
    }
}

TEST(Triangle, SolutionsSatisfyRulesAndExactness) {
  std::mt19937 rng(3);
  CharSet b2 = load_charset(data("charsets/b2.json"));
  std::uniform_int_distribution<int> small(0, 3), deg(0, 4);
  for (int it = 0; it < 300; ++it) {
    std::array<CohPoly, 3> p{CohPoly("B2"), CohPoly("B2"), CohPoly("B2")};
    for (auto& x : p)
      for (int n = small(rng); n > 0; --n) x.add_term({deg(rng), 0}, {"St", Unity()}, 1 + small(rng));
    int unknown = it % 3;
    Triangle tri{"random", {}};
    for (int o = 0; o < 3; ++o)
      if (o != unknown) tri.objs[o] = family_of(p[o]);
    std::vector<Rule> rules;
    Rule w{RuleKind::VanishWindow, static_cast<Obj>(unknown), 1, 3, "", {}, 0, 0, "w"};
    Rule ex{RuleKind::EigenvalueExclude, static_cast<Obj>(unknown), 0, 0, "St", {{2, 0}}, 0, 0, "x"};
    if (small(rng) % 2) rules.push_back(w);
    if (small(rng) % 2) rules.push_back(ex);
    try {
      auto sol = solve_triangle(tri, rules, b2);
      for (const auto& s : sol.slices)
        for (const auto& x : s.solutions) {
          EXPECT_TRUE(flat_exact(x));
          for (const auto& [h, m] : x[unknown]) {
            for (const auto& r : rules) {
              if (r.kind == RuleKind::VanishWindow) EXPECT_TRUE(h >= r.lo && h <= r.hi);
              if (r.kind == RuleKind::EigenvalueExclude) EXPECT_NE(h, 2);
            }
            EXPECT_GT(m, 0);
          }
        }
    } catch (const ContradictionError&) {
    }
  }
}

TEST(Triangle, RejectsTwoUnknowns) {
  CharSet b2 = load_charset(data("charsets/b2.json"));
  Triangle tri{"bad", {std::nullopt, std::nullopt, Family{}}};
  EXPECT_THROW(solve_triangle(tri, {}, b2), UsageError);
}

TEST(Triangle, InfeasibleNamesSlice) {
  CharSet b2 = load_charset(data("charsets/b2.json"));
  CohPoly total = parse_poly("h^4 St", b2);
  Triangle tri{"bad", {std::nullopt, family_of(total), Family{}}};
  Rule w{RuleKind::VanishWindow, Obj::Open, 6, 8, "", {}, 0, 0, "w"};
  try {
    solve_triangle(tri, {w}, b2);
    FAIL();
  } catch (const ContradictionError& e) {
    EXPECT_NE(std::string(e.what()).find("St@1 t^0"), std::string::npos) << e.what();
  }
}

TEST(Euler, Checks) {
  F4Quotient q;
  EXPECT_TRUE(euler_check(q.open, q.open + q.closed, q.closed).empty());
  Triangle tri{"f4-quotient", {family_of(q.open), std::nullopt, family_of(q.closed)}};
  for (const auto& s : solve_triangle(tri, {}, q.b2).slices)
    for (const auto& x : s.solutions) {
      long long e = 0;
      for (int o = 0; o < 3; ++o)
        for (const auto& [h, m] : x[o]) e += (o == 1 ? 1 : -1) * (h % 2 ? -m : m);
      EXPECT_EQ(e, 0);
    }
  CohPoly corrupted = q.open + q.closed + parse_poly("h^9 t^4 Id", q.b2);
  auto bad = euler_check(q.open, corrupted, q.closed);
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(slice_name(bad[0]), "Id@1 t^4");
}
