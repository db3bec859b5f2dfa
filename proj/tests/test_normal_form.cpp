#include <gtest/gtest.h>

#include <random>

#include "borelq/normal_form.hpp"
#include "support.hpp"

using namespace borelq;
using borelq::testing::all_f2_forms;
using borelq::testing::random_borel;
using borelq::testing::random_form;
using borelq::testing::random_sparse_form;

namespace {

const FieldElement kOne = FieldElement::one();
const FieldElement kW = FieldElement::omega();

QuadraticForm F(const char* text, int n = -1) { return parse_form(text, n); }
NormalForm N(const char* text, int n = -1) { return parse_normal_form(text, n); }

bool has_violation(const NormalityReport& r, Condition c) {
  for (const auto& v : r.violations)
    if (v.condition == c) return true;
  return false;
}

// Evaluate the two flag conditions straight from the component list.
bool conditions_hold(const NormalForm& nf) {
  const auto& cs = nf.components();
  for (std::size_t t = 0; t < cs.size(); ++t) {
    if (cs[t].eps && !cs[t].delta)
      for (std::size_t s = t + 1; s < cs.size(); ++s)
        if (cs[s].eps) return false;
    for (std::size_t s = 0; s < cs.size(); ++s)
      if (s != t && cs[s].delta && cs[t].delta && cs[s].i < cs[t].i && cs[t].i < cs[t].j &&
          cs[t].j < cs[s].j && cs[s].eps && cs[t].eps)
        return false;
  }
  return true;
}

void expect_sound(const QuadraticForm& q) {
  const NormalizeResult r = normalize(q);
  EXPECT_TRUE(r.witness.is_upper_triangular());
  EXPECT_FALSE(r.witness.determinant().is_zero());
  EXPECT_EQ(act(r.witness, q), r.nf.as_form()) << to_string(q);
  EXPECT_TRUE(is_normal(r.nf.as_form()).normal) << to_string(q);
}

}  // namespace

TEST(NormalForm, IsNormalExamples) {
  EXPECT_TRUE(is_normal(F("x1^2 + x1*x5 + x2*x3 + x4^2 + x4*x6 + x7^2 + x8*x9")).normal);
  const auto two_dots = is_normal(F("x1^2 + x2^2"));
  EXPECT_FALSE(two_dots.normal);
  EXPECT_TRUE(has_violation(two_dots, Condition::c1));
  const auto nested = is_normal(F("x1^2 + x1*x4 + x2^2 + x2*x3"));
  EXPECT_FALSE(nested.normal);
  EXPECT_TRUE(has_violation(nested, Condition::c2));
  EXPECT_EQ(nested.violations.front().indices, (std::vector<int>{1, 4, 2, 3}));
  EXPECT_TRUE(has_violation(is_normal(F("w*x1^2")), Condition::coefficients));
  EXPECT_TRUE(has_violation(is_normal(F("x1*x2 + x1*x3")), Condition::disjointness));
  EXPECT_TRUE(has_violation(is_normal(F("x1*x2 + x2^2")), Condition::component_shape));
  EXPECT_TRUE(is_normal(QuadraticForm(3)).normal);
  // Crossing pairs may both carry squares.
  EXPECT_TRUE(is_normal(F("x1^2 + x1*x3 + x2^2 + x2*x4")).normal);
}

TEST(NormalForm, ViolationsReproduceDirectEvaluation) {
  for (int n = 0; n <= 4; ++n) {
    for (const auto& q : all_f2_forms(n)) {
      const auto report = is_normal(q);
      bool shaped = true;
      std::map<int, int> mixed;
      for (const auto& [m, c] : q.terms())
        if (m.first != m.second) {
          ++mixed[m.first];
          ++mixed[m.second];
        }
      for (const auto& [k, count] : mixed)
        if (count > 1) shaped = false;
      for (const auto& [m, c] : q.terms())
        if (m.first != m.second && q.coef(m.second, m.second).is_one()) shaped = false;
      if (!shaped) {
        EXPECT_FALSE(report.normal);
        continue;
      }
      std::vector<NormalComponent> comps;
      for (const auto& [m, c] : q.terms()) {
        if (m.first != m.second) comps.push_back({m.first, m.second, q.coef(m.first, m.first).is_one(), true});
        else if (!mixed.count(m.first)) comps.push_back({m.first, m.first, true, false});
      }
      EXPECT_EQ(report.normal, conditions_hold(NormalForm(n, comps))) << to_string(q);
    }
  }
}

TEST(NormalForm, NormalizeExamples) {
  {
    const auto r = normalize(F("x1^2 + x1*x2 + x2^2"));
    EXPECT_EQ(to_string(r.nf), "x1^2 + x1*x2");
    EXPECT_EQ(r.witness(1, 2), kW);
    EXPECT_EQ(r.witness(1, 1), kOne);
    EXPECT_EQ(r.witness(2, 2), kOne);
    EXPECT_EQ(r.level(), 1);
  }
  {
    const auto r = normalize(F("x2^2 + x1*x2"));
    EXPECT_EQ(to_string(r.nf), "x1*x2");
    EXPECT_EQ(substitution_text(r.witness), "x1 -> x1 + x2");
  }
  EXPECT_EQ(to_string(normalize(F("x1^2 + x2^2 + x2*x3")).nf), "x1^2 + x2*x3");
  EXPECT_EQ(to_string(normalize(F("x1^2 + x1*x4 + x2^2 + x2*x3")).nf), "x1^2 + x1*x4 + x2*x3");
  const auto zero = normalize(QuadraticForm(3));
  EXPECT_TRUE(zero.nf.is_zero());
  EXPECT_TRUE(zero.witness.is_identity());
  EXPECT_EQ(to_string(normalize(F("w*x1^2", 1)).nf), "x1^2");
  EXPECT_EQ(to_string(normalize(F("x1*x2 + x1*x3 + x2*x3")).nf), "x1*x2 + x3^2");
}

TEST(NormalForm, WitnessSoundnessExhaustiveF2) {
  for (int n = 0; n <= 4; ++n)
    for (const auto& q : all_f2_forms(n)) expect_sound(q);
}

TEST(NormalForm, WitnessSoundnessRandomTower) {
  std::mt19937_64 rng(41);
  for (int n = 1; n <= 7; ++n) {
    for (int rep = 0; rep < 150; ++rep) {
      const int level = static_cast<int>(rng() % 4);
      expect_sound(rep % 2 ? random_form(rng, n, level) : random_sparse_form(rng, n, level));
    }
  }
}

TEST(NormalForm, OrbitInvariance) {
  std::mt19937_64 rng(43);
  for (int n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 1000; ++rep) {
      const int level = static_cast<int>(rng() % 2);
      const QuadraticForm q = rep % 2 ? random_form(rng, n, level) : random_sparse_form(rng, n, level);
      const GroupElement b = random_borel(rng, n, level);
      EXPECT_EQ(normalize(act(b, q)).nf, normalize(q).nf) << to_string(q);
    }
  }
}

TEST(NormalForm, Idempotence) {
  for (int n = 0; n <= 4; ++n) {
    for (const auto& q : all_f2_forms(n)) {
      const auto nf = normalize(q).nf;
      const auto again = normalize(nf.as_form());
      EXPECT_EQ(again.nf, nf);
      EXPECT_TRUE(again.witness.is_identity());
    }
  }
}

TEST(NormalForm, ExtendExamples) {
  EXPECT_EQ(to_string(extend(N("x1^2 + x2*x3"))), "x1^2 + x1*x4 + x2*x3");
  const NormalForm e = extend(N("x1*x2"));
  EXPECT_EQ(e.n(), 3);
  EXPECT_EQ(to_string(e), "x1*x2");
  const NormalForm big = extend(N("x1^2 + x1*x5 + x2*x3 + x4^2 + x4*x6 + x7^2 + x8*x9"));
  EXPECT_EQ(big.n(), 10);
  EXPECT_EQ(big.components()[3], (NormalComponent{7, 10, true, true}));
  EXPECT_THROW(extend(NormalForm(2, {{1, 1, true, false}, {2, 2, true, false}})), InvalidInput);
}

TEST(NormalForm, ExtensionCompatibility) {
  for (int n = 0; n <= 4; ++n) {
    for (const auto& q : all_f2_forms(n)) {
      const NormalForm nf = normalize(q).nf;
      const NormalForm ext = extend(nf);
      EXPECT_EQ(is_normal(ext.as_form()).normal, true);
      EXPECT_EQ(normalize(ext.as_form()).nf, ext);
      // Restricting at x_{n+1} = 0 recovers nf.
      QuadraticForm restricted(n);
      const QuadraticForm ext_form = ext.as_form();
      for (const auto& [m, c] : ext_form.terms())
        if (m.second <= n) restricted.set(m.first, m.second, c);
      EXPECT_EQ(restricted, nf.as_form());
    }
  }
  // Normality transfers in both directions for forms with at most one pure square.
  for (int n = 1; n <= 4; ++n) {
    for (const auto& q : all_f2_forms(n)) {
      const auto shape = is_normal(q);
      if (has_violation(shape, Condition::coefficients) ||
          has_violation(shape, Condition::disjointness) ||
          has_violation(shape, Condition::component_shape))
        continue;
      std::vector<NormalComponent> comps;
      std::set<int> in_pair;
      for (const auto& [m, c] : q.terms())
        if (m.first != m.second) in_pair.insert({m.first, m.second});
      for (const auto& [m, c] : q.terms()) {
        if (m.first != m.second) comps.push_back({m.first, m.second, q.coef(m.first, m.first).is_one(), true});
        else if (!in_pair.count(m.first)) comps.push_back({m.first, m.first, true, false});
      }
      int squares = 0;
      for (const auto& c : comps) squares += c.is_square();
      if (squares > 1) continue;
      const NormalForm raw(n, comps);
      EXPECT_EQ(shape.normal, is_normal(extend(raw).as_form()).normal) << to_string(q);
    }
  }
}

TEST(NormalForm, Brank) {
  EXPECT_EQ(brank(N("x1^2 + x1*x3 + x2^2")), 3);
  EXPECT_EQ(brank(N("x1*x2")), 1);
  EXPECT_EQ(brank(NormalForm(3, {})), 0);
  // brank <= |ind| always, so full rank means nondegenerate with no bare pair.
  for (int n = 0; n <= 4; ++n) {
    for (const auto& q : all_f2_forms(n)) {
      const NormalForm nf = normalize(q).nf;
      const int r = brank(nf);
      EXPECT_GE(r, 0);
      EXPECT_LE(r, n);
      bool every_pair_squared = true;
      for (const auto& c : nf.components()) every_pair_squared = every_pair_squared && c.eps;
      EXPECT_EQ(r == n, is_nondegenerate(nf) && every_pair_squared) << to_string(nf);
    }
  }
}

TEST(NormalForm, Nondegeneracy) {
  EXPECT_TRUE(is_nondegenerate(N("x1^2 + x1*x2 + x3^2", 3)));
  EXPECT_FALSE(is_nondegenerate(N("x1*x2", 3)));
  EXPECT_TRUE(is_nondegenerate(N("x1^2 + x2*x3", 3)));
}

TEST(NormalForm, ConnectedComponents) {
  const NormalForm two = N("x1^2 + x1*x2 + x3^2 + x3*x4");
  EXPECT_EQ(cc(two), 2);
  EXPECT_EQ(cc(N("x1^2 + x1*x3 + x2^2 + x2*x4")), 1);
  const auto parts = connected_components(two);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(to_string(parts[0]), "x1^2 + x1*x2");
  EXPECT_EQ(to_string(parts[1]), "x3^2 + x3*x4");
  EXPECT_EQ(cc(N("x1^2 + x1*x3 + x2^2")), 1);
  EXPECT_EQ(cc(N("x1^2 + x1*x2 + x3^2")), 2);
  // The 9-dot example is not of maximal rank: cc refuses it, the diagram split does not.
  const NormalForm nine = N("x1^2 + x1*x5 + x2*x3 + x4^2 + x4*x6 + x7^2 + x8*x9");
  EXPECT_THROW(cc(nine), PreconditionViolation);
  const auto blocks = diagram_components(nine);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(to_string(blocks[1]), "x7^2 + x8*x9");
  EXPECT_EQ(cc(N("x1^2 + x1*x3 + x2^2 + x2*x4 + x5^2 + x5*x7 + x6^2 + x6*x8 + x9^2")), 3);
}

TEST(NormalForm, ArcDiagramAndDyckPath) {
  const ArcDiagram d = arc_diagram(N("x1^2 + x1*x2"));
  EXPECT_EQ(d.arcs, (std::vector<std::pair<int, int>>{{1, 2}}));
  EXPECT_EQ(d.filled, (std::set<int>{1}));
  const ArcDiagram empty = arc_diagram(NormalForm(0, {}));
  EXPECT_TRUE(empty.arcs.empty());
  EXPECT_TRUE(empty.filled.empty());

  // The 14-dot component with pairs (1,3),(2,7),(4,8),(5,10),(6,11),(9,13),(12,14).
  std::vector<NormalComponent> comps;
  for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 3}, {2, 7}, {4, 8}, {5, 10}, {6, 11}, {9, 13}, {12, 14}})
    comps.push_back({i, j, true, true});
  const NormalForm big(14, comps);
  ASSERT_TRUE(in_q(big));
  EXPECT_EQ(cc(big), 1);
  const auto path = dyck_path(big);
  EXPECT_EQ(to_string(path), "UUDUUUDDUDDUDD");
  int height = 0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    height += path[k] == Step::up ? 1 : -1;
    EXPECT_GE(height, 0);
    if (k + 1 < path.size()) {
      EXPECT_GT(height, 0);
    }
  }
  EXPECT_EQ(height, 0);
  EXPECT_EQ(to_string(dyck_path(N("x1^2 + x1*x3 + x2^2"))), "UUDD");
  EXPECT_THROW(dyck_path(N("x1*x2")), PreconditionViolation);
}

TEST(NormalForm, DiagramEmitters) {
  const ArcDiagram d = arc_diagram(N("x1^2 + x1*x3 + x2*x4"));
  const std::string ascii = arc_ascii(d);
  EXPECT_NE(ascii.find('*'), std::string::npos);
  EXPECT_NE(ascii.find('o'), std::string::npos);
  const std::string dot = arc_dot(d);
  EXPECT_EQ(dot.rfind("graph arcs {", 0), 0u);
  EXPECT_NE(dot.find("v1 -- v3;"), std::string::npos);
  EXPECT_NE(dot.find("v2 -- v4;"), std::string::npos);
  const std::string tikz = arc_tikz(d);
  EXPECT_NE(tikz.find("\\documentclass[tikz]{standalone}"), std::string::npos);
  EXPECT_NE(tikz.find("\\node[filled"), std::string::npos);
  EXPECT_NE(tikz.find("\\draw (1) to"), std::string::npos);
}
