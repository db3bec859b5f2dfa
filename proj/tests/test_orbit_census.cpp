#include <gtest/gtest.h>

#include <set>

#include "borelq/orbit_census.hpp"
#include "support.hpp"

using namespace borelq;

namespace {

std::set<std::string> texts(const std::vector<NormalForm>& forms) {
  std::set<std::string> out;
  for (const auto& f : forms) out.insert(to_string(f));
  return out;
}

const std::set<std::string> kTwoVariables = {"0", "x2^2", "x1^2", "x1*x2", "x1^2 + x1*x2"};
const std::set<std::string> kThreeVariables = {
    "0",           "x3^2",          "x2^2",          "x1^2",          "x2*x3",
    "x1*x3",       "x2^2 + x2*x3",  "x1*x2",         "x1^2 + x1*x3",  "x1^2 + x1*x2",
    "x1^2 + x2*x3", "x1*x3 + x2^2", "x1*x2 + x3^2", "x1^2 + x1*x2 + x3^2", "x1^2 + x1*x3 + x2^2"};

}  // namespace

TEST(OrbitCensus, SmallEnumerations) {
  EXPECT_EQ(texts(enumerate_normal_forms(0)), (std::set<std::string>{"0"}));
  EXPECT_EQ(texts(enumerate_normal_forms(1)), (std::set<std::string>{"0", "x1^2"}));
  EXPECT_EQ(texts(enumerate_normal_forms(2)), kTwoVariables);
  EXPECT_EQ(enumerate_normal_forms(2).size(), 5u);
  EXPECT_EQ(texts(enumerate_normal_forms(3)), kThreeVariables);
  EXPECT_EQ(enumerate_normal_forms(3).size(), 15u);
}

TEST(OrbitCensus, EnumerationMatchesNormalityFilter) {
  // Normal forms have 0/1 coefficients, so filtering all F_2 tables is an independent route.
  for (int n = 0; n <= 5; ++n) {
    std::set<std::string> filtered;
    for (const auto& q : borelq::testing::all_f2_forms(n))
      if (is_normal(q).normal) filtered.insert(to_string(q));
    const auto listed = enumerate_normal_forms(n);
    EXPECT_EQ(texts(listed), filtered) << "n=" << n;
    EXPECT_EQ(listed.size(), filtered.size()) << "duplicates at n=" << n;
    for (const auto& nf : listed) EXPECT_TRUE(is_normal(nf.as_form()).normal);
  }
}

TEST(OrbitCensus, TotalsAreStable) {
  // Recorded from enumeration; cross-checked against the filter above for n <= 5.
  const std::vector<std::size_t> totals = {1, 2, 5, 15, 48, 171, 637, 2549, 10586};
  for (int n = 0; n < static_cast<int>(totals.size()); ++n)
    EXPECT_EQ(enumerate_normal_forms(n).size(), totals[n]) << "n=" << n;
}

TEST(OrbitCensus, CanonicalOrderAndRoundTrip) {
  for (int n = 0; n <= 5; ++n) {
    const auto forms = enumerate_normal_forms(n);
    for (std::size_t k = 1; k < forms.size(); ++k) EXPECT_TRUE(canonical_less(forms[k - 1], forms[k]));
    for (const auto& nf : forms) EXPECT_EQ(parse_normal_form(to_string(nf), n), nf);
  }
  EXPECT_THROW(enumerate_normal_forms(13), SizeGuardExceeded);
}

TEST(OrbitCensus, CatalanNumbers) {
  const std::vector<int> expected = {1, 1, 2, 5, 14, 42, 132, 429};
  for (int m = 0; m < static_cast<int>(expected.size()); ++m) EXPECT_EQ(catalan(m), expected[m]);
  EXPECT_EQ(catalan(30), BigInt("3814986502092304"));
}

TEST(OrbitCensus, MaxRankCounts) {
  EXPECT_EQ(max_rank_count(3), 2);
  EXPECT_EQ(max_rank_count(4), 2);
  EXPECT_EQ(max_rank_count(6), 5);
  for (int n = 1; n <= 9; ++n) {
    EXPECT_EQ(max_rank_count(n), catalan((n + 1) / 2)) << "n=" << n;
    const auto q = enumerate_max_rank(n);
    EXPECT_EQ(BigInt(q.size()), catalan((n + 1) / 2));
    std::set<std::string> direct;
    for (const auto& nf : enumerate_normal_forms(n))
      if (in_q(nf)) direct.insert(to_string(nf));
    EXPECT_EQ(texts(q), direct) << "n=" << n;
  }
  EXPECT_EQ(texts(enumerate_max_rank(3)),
            (std::set<std::string>{"x1^2 + x1*x2 + x3^2", "x1^2 + x1*x3 + x2^2"}));
  EXPECT_EQ(texts(enumerate_max_rank(4)),
            (std::set<std::string>{"x1^2 + x1*x2 + x3^2 + x3*x4", "x1^2 + x1*x3 + x2^2 + x2*x4"}));
}

TEST(OrbitCensus, CatalanTriangle) {
  EXPECT_EQ(catalan_triangle(0, 0), 1);
  EXPECT_EQ(catalan_triangle(3, 2), 5);
  EXPECT_EQ(catalan_triangle(2, 3), 0);
  EXPECT_EQ(catalan_triangle(-1, 0), 0);
  for (int n = 1; n <= 12; ++n) EXPECT_EQ(catalan_triangle(n, 1), n);
  for (int n = 0; n <= 12; ++n) EXPECT_EQ(catalan_triangle(n, n), catalan(n));
  for (int n = 1; n <= 12; ++n)
    for (int k = 1; k <= n; ++k)
      EXPECT_EQ(catalan_triangle(n, k), catalan_triangle(n, k - 1) + catalan_triangle(n - 1, k));
  // C(3,1) = C(0,0) C(2,1) + C(1,1) C(1,0).
  EXPECT_EQ(catalan_triangle(3, 1),
            catalan_triangle(0, 0) * catalan_triangle(2, 1) + catalan_triangle(1, 1) * catalan_triangle(1, 0));
  const auto report = verify_triangle_identity(12);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.checked, 12 * 13 / 2);
  EXPECT_TRUE(verify_triangle_identity(16).ok());
}

TEST(OrbitCensus, BCounts) {
  EXPECT_EQ(b_count_direct(4, 2), 1);
  EXPECT_EQ(b_count_direct(8, 2), 5);
  EXPECT_EQ(b_count_direct(8, 3), 3);
  EXPECT_EQ(b_count_direct(6, 1), 2);
  for (int r = 1; r <= 7; ++r) {
    BigInt total = 0;
    for (int f = 1; f <= r; ++f) {
      const BigInt direct = b_count_direct(2 * r, f);
      EXPECT_EQ(direct, b_count_recursive(2 * r, f)) << r << "," << f;
      EXPECT_EQ(direct, catalan_triangle(r - 1, r - f)) << r << "," << f;
      total += direct;
    }
    EXPECT_EQ(total, catalan(r));
  }
  for (int r = 0; r <= 6; ++r)
    for (int f = 0; f <= r + 1; ++f) EXPECT_EQ(b_count_direct(2 * r + 1, f), b_count_direct(2 * r + 2, f));
}

TEST(OrbitCensus, ConnectedPathsCountCatalan) {
  // Connected Q_{2l} forms are the Dyck paths touching ground only at the ends: C_{l-1} of them.
  for (int l = 1; l <= 7; ++l) {
    std::set<std::string> paths;
    int connected = 0;
    for (const auto& q : enumerate_max_rank(2 * l)) {
      if (cc(q) != 1) continue;
      ++connected;
      const auto path = dyck_path(q);
      int height = 0;
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        height += path[k] == Step::up ? 1 : -1;
        EXPECT_GT(height, 0);
      }
      paths.insert(to_string(path));
    }
    EXPECT_EQ(BigInt(connected), catalan(l - 1));
    EXPECT_EQ(paths.size(), static_cast<std::size_t>(connected));
  }
}

TEST(OrbitCensus, CensusRows) {
  const auto rows = census(3);
  ASSERT_EQ(rows.size(), 15u);
  int with_cc = 0;
  for (const auto& r : rows) {
    EXPECT_EQ(r.brank, brank(r.nf));
    EXPECT_EQ(r.nondegenerate, is_nondegenerate(r.nf));
    EXPECT_EQ(r.cc.has_value(), in_q(r.nf));
    with_cc += r.cc.has_value();
  }
  EXPECT_EQ(with_cc, 2);
  EXPECT_EQ(rows.front().brank, 3);
  const std::string table = census_table(census(2));
  EXPECT_NE(table.find("x1^2 + x1*x2"), std::string::npos);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 6);
}
