#include <gtest/gtest.h>

#include <map>
#include <set>

#include "borelq/oracle.hpp"
#include "support.hpp"

using namespace borelq;
namespace orc = borelq::oracle;

namespace {

QuadraticForm F(const char* text, int n = -1) { return parse_form(text, n); }

bool same_orbit(const orc::OrbitTable& t, const QuadraticForm& a, const QuadraticForm& b) {
  return orc::orbit_id(t, a) == orc::orbit_id(t, b);
}

// All unit upper-triangular and diagonal matrices over F_4, as library group elements.
std::vector<GroupElement> all_borel(int n, int level) {
  std::vector<GroupElement> out;
  const int fsize = level == 0 ? 2 : 4;
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) slots.emplace_back(i, j);
  std::vector<int> digits(slots.size(), 0);
  while (true) {
    bool valid = true;
    std::vector<FieldElement> e(static_cast<std::size_t>(n) * n);
    for (std::size_t k = 0; k < slots.size(); ++k) {
      const auto [i, j] = slots[k];
      if (i == j && digits[k] == 0) valid = false;
      e[i * n + j] = FieldElement::from_bits(digits[k], level);
    }
    if (valid) out.push_back(GroupElement::from_entries(n, std::move(e), GroupKind::borel));
    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == fsize) digits[k++] = 0;
    if (k == digits.size()) break;
  }
  return out;
}

}  // namespace

TEST(Oracle, OrbitExamples) {
  EXPECT_EQ(orc::enumerate_b_orbits(1, 0).orbit_count(), 2u);
  const auto f2 = orc::enumerate_b_orbits(2, 0);
  EXPECT_EQ(f2.orbit_of.size(), 8u);
  EXPECT_FALSE(same_orbit(f2, F("x1^2 + x1*x2 + x2^2"), F("x1^2 + x1*x2")));
  const auto f4 = orc::enumerate_b_orbits(2, 1);
  EXPECT_TRUE(same_orbit(f4, F("x1^2 + x1*x2 + x2^2"), F("x1^2 + x1*x2")));
  // F_4 is not quadratically closed: x1^2 + x1*x2 + w*x2^2 stays a separate orbit.
  EXPECT_EQ(f4.orbit_count(), 6u);
  EXPECT_FALSE(same_orbit(f4, F("x1^2 + x1*x2 + w*x2^2"), F("x1^2 + x1*x2")));
  for (std::size_t id = 0; id < f2.orbit_count(); ++id) {
    for (orc::Code c = 0; c < f2.orbit_of.size(); ++c)
      if (f2.orbit_of[c] == id) {
        EXPECT_EQ(f2.representative[id], c);
        break;
      }
  }
  EXPECT_THROW(orc::enumerate_b_orbits(4, 1), SizeGuardExceeded);
  EXPECT_THROW(orc::enumerate_b_orbits(7, 0), SizeGuardExceeded);
}

TEST(Oracle, GeneratorClosureMatchesFullGroup) {
  for (auto [n, level] : std::vector<std::pair<int, int>>{{2, 0}, {3, 0}, {2, 1}}) {
    const auto table = orc::enumerate_b_orbits(n, level);
    const orc::Space space(n, level);
    const auto group = all_borel(n, level);
    std::map<std::uint32_t, std::set<orc::Code>> by_table;
    for (orc::Code c = 0; c < space.size(); ++c) by_table[table.orbit_of[c]].insert(c);
    for (const auto& [id, members] : by_table) {
      std::set<orc::Code> orbit;
      const QuadraticForm q = space.decode(*members.begin());
      for (const auto& b : group) orbit.insert(space.encode(act(b, q)));
      EXPECT_EQ(orbit, members) << "n=" << n << " level " << level << " " << to_string(q);
    }
  }
}

TEST(Oracle, FiberChecks) {
  for (int n = 0; n <= 4; ++n) {
    const auto r = orc::fiber_check(n, 0);
    EXPECT_TRUE(r.ok()) << "n=" << n;
    EXPECT_EQ(r.forms_checked, std::size_t{1} << (n * (n + 1) / 2));
  }
  EXPECT_EQ(orc::fiber_check(2, 0).distinct_images, 5u);
  EXPECT_EQ(orc::fiber_check(0, 0).distinct_images, 1u);
  for (int n = 1; n <= 3; ++n) {
    const auto r = orc::fiber_check(n, 1);
    EXPECT_TRUE(r.ok()) << "n=" << n;
    EXPECT_GE(r.orbits, r.census_count);
  }
  // Over F_2 the orbit partition strictly refines the fibers from n = 2 on.
  const auto r2 = orc::fiber_check(2, 0);
  EXPECT_GT(r2.orbits, r2.distinct_images);
}

TEST(Oracle, StabilizerExamples) {
  const auto four = F("x1^2 + x1*x2 + x3^2 + x3*x4");
  const auto fit4 = orc::stabilizer_cardinality_fit(four);
  EXPECT_EQ(fit4.count_f2, 4u);
  EXPECT_EQ(fit4.count_f4, 4u);
  EXPECT_TRUE(fit4.exact);
  EXPECT_EQ(fit4.c, 4u);
  EXPECT_EQ(fit4.d, 0);
  const auto three = F("x1^2 + x1*x3 + x2^2");
  const auto fit3 = orc::stabilizer_cardinality_fit(three);
  EXPECT_EQ(fit3.count_f2, 2u);
  EXPECT_EQ(fit3.count_f4, 4u);
  EXPECT_EQ(fit3.c, 1u);
  EXPECT_EQ(fit3.d, 1);
  // The whole group fixes 0.
  EXPECT_EQ(orc::stabilizer_count(QuadraticForm(3), 0), 8u);
  EXPECT_EQ(orc::stabilizer_count(QuadraticForm(2), 1), 36u);
}

TEST(Oracle, StabilizerSearchIsExhaustiveAndSound) {
  for (auto [n, level] : std::vector<std::pair<int, int>>{{3, 0}, {2, 1}, {4, 0}}) {
    const auto group = all_borel(n, level);
    for (const auto& nf : enumerate_normal_forms(n)) {
      const QuadraticForm q = nf.as_form();
      std::set<std::vector<std::uint8_t>> expected;
      for (const auto& b : group)
        if (act(b, q) == q) {
          std::vector<std::uint8_t> e;
          for (const auto& x : b.entries()) e.push_back(static_cast<std::uint8_t>(x.bits()));
          expected.insert(e);
        }
      std::set<std::vector<std::uint8_t>> found;
      for (const auto& m : orc::stabilizer_bruteforce(q, level)) {
        found.insert(m.e);
        EXPECT_EQ(act(orc::to_group_element(m, level), q), q);
      }
      EXPECT_EQ(found, expected) << to_string(q);
    }
  }
}

TEST(Oracle, TorusProjection) {
  EXPECT_EQ(orc::torus_projection_size(F("x1^2 + x1*x3 + x2^2"), 1), 1u);
  EXPECT_EQ(orc::torus_projection_size(F("x1^2 + x2*x3"), 1), 3u);
  EXPECT_EQ(orc::torus_projection_size(QuadraticForm(3), 1), 27u);
  EXPECT_EQ(orc::torus_projection_size(F("x1*x2"), 1), 3u);
}

TEST(Oracle, ParabolicClosure) {
  const auto t2 = orc::enumerate_b_orbits(2, 1);
  const auto p = orc::parabolic_bruteforce(t2, F("x1*x2"), 1);
  EXPECT_EQ(p, (std::set<std::uint32_t>{orc::orbit_id(t2, F("x1*x2")), orc::orbit_id(t2, F("x1^2 + x1*x2"))}));
  const auto t3 = orc::enumerate_b_orbits(3, 1);
  const auto single = orc::parabolic_bruteforce(t3, F("x1^2 + x2*x3"), 2);
  EXPECT_EQ(single.size(), 1u);
  EXPECT_EQ(orc::parabolic_bruteforce(t3, F("x3^2"), 1).size(), 1u);
  EXPECT_EQ(orc::parabolic_bruteforce(F("x3^2"), 1, 0).size(), 1u);
  EXPECT_THROW(orc::parabolic_bruteforce(F("x4^2"), 1, 1), SizeGuardExceeded);
}

TEST(Oracle, Nondegeneracy) {
  const auto a = orc::nondegeneracy_bruteforce(F("x1^2 + x1*x2 + x3^2"), 0);
  EXPECT_TRUE(a.nondegenerate);
  EXPECT_EQ(a.radical_dim, 1);
  const auto b = orc::nondegeneracy_bruteforce(F("x1*x2", 3), 0);
  EXPECT_FALSE(b.nondegenerate);
  ASSERT_EQ(b.zero_vectors.size(), 1u);
  EXPECT_EQ(b.zero_vectors[0], (std::vector<std::uint8_t>{0, 0, 1}));
  const auto c = orc::nondegeneracy_bruteforce(F("x1*x2"), 0);
  EXPECT_TRUE(c.nondegenerate);
  EXPECT_EQ(c.radical_dim, 0);
  // Radical of dimension two always has an isotropic vector.
  EXPECT_FALSE(orc::nondegeneracy_bruteforce(F("x1^2 + x2^2"), 0).nondegenerate);
  EXPECT_FALSE(orc::nondegeneracy_bruteforce(F("x1^2 + w*x2^2"), 1).nondegenerate);
}

TEST(Oracle, OrbitDimensionOrdersEqualRankVertices) {
  const auto d = [](const char* t) { return *orc::orbit_dimension_estimate(F(t, 3)); };
  EXPECT_GT(d("x1^2"), d("x2^2"));
  EXPECT_GT(d("x1^2 + x1*x2 + x3^2"), d("x1^2 + x1*x3 + x2^2"));
  EXPECT_NEAR(d("0"), 0.0, 1e-12);
}
