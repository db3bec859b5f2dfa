#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "borelq/oracle.hpp"
#include "borelq/orbit_census.hpp"
#include "borelq/orbit_covers.hpp"
#include "borelq/parabolic_orbits.hpp"
#include "borelq/random.hpp"

namespace borelq::verify {

inline constexpr std::size_t kKeptFailures = 20;

struct SuiteResult {
  std::string suite;
  int n = 0;
  int level = 0;
  std::size_t checked = 0;
  std::size_t failure_count = 0;
  std::vector<std::string> failures;  // the first kKeptFailures messages

  bool ok() const { return failure_count == 0; }

  void check(bool good, const std::function<std::string()>& message) {
    ++checked;
    if (good) return;
    ++failure_count;
    if (failures.size() < kKeptFailures) failures.push_back(message());
  }
};

inline SuiteResult start(const char* suite, int n, int level) {
  SuiteResult r;
  r.suite = suite;
  r.n = n;
  r.level = level;
  return r;
}

inline void require_n(int n, int lo, int hi, const char* suite) {
  if (n < lo) throw InvalidInput(std::string(suite) + " needs n >= " + std::to_string(lo));
  if (n > hi) {
    throw SizeGuardExceeded(std::string(suite) + " is limited to n <= " + std::to_string(hi));
  }
}

inline long long binomial(int n, int k) {
  long long r = 1;
  for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

// Every form over the field, normalized: witness, orbit constancy, image count.
inline SuiteResult fibers(int n, int level = 0) {
  SuiteResult r = start("fibers", n, level);
  const auto report = oracle::fiber_check(n, level);
  r.checked = report.forms_checked;
  r.failure_count = report.witness_failures + report.violations.size();
  for (const auto& v : report.violations)
    if (r.failures.size() < kKeptFailures) r.failures.push_back(v);
  if (report.witness_failures) {
    r.failures.push_back(std::to_string(report.witness_failures) + " witness mismatches");
  }
  if (report.distinct_images != report.census_count) {
    ++r.failure_count;
    r.failures.push_back("normalize hits " + std::to_string(report.distinct_images) +
                         " forms, census has " + std::to_string(report.census_count));
  }
  return r;
}

// normalize(act(b, q)) == normalize(q) for random Borel b.
inline SuiteResult invariance(int n, int level = 1, int trials = 1000, std::uint64_t seed = 2024) {
  require_n(n, 1, 12, "invariance");
  SuiteResult r = start("invariance", n, level);
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(n));
  for (int t = 0; t < trials; ++t) {
    const QuadraticForm q = t % 2 ? random_form(rng, n, level) : random_sparse_form(rng, n, level);
    const GroupElement b = random_borel(rng, n, level);
    const NormalizeResult before = normalize(q);
    const QuadraticForm moved = act(b, q);
    const NormalizeResult after = normalize(moved);
    r.check(after.nf == before.nf && act(after.witness, moved) == after.nf.as_form(), [&] {
      return to_string(q) + " moved to " + to_string(moved) + " normalizes to " + to_string(after.nf) +
             " instead of " + to_string(before.nf);
    });
  }
  return r;
}

// Triangle recursion up to n, and the b(n, f) statistics for every n' <= n.
inline SuiteResult triangle(int n) {
  require_n(n, 1, 14, "triangle");
  SuiteResult r = start("triangle", n, 0);
  const auto report = verify_triangle_identity(n);
  r.checked += static_cast<std::size_t>(report.checked);
  for (const auto& [a, b] : report.failures) {
    ++r.failure_count;
    r.failures.push_back("triangle recursion fails at (" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  for (int m = 2; m <= n; m += 2) {
    const int rr = m / 2;
    BigInt total = 0;
    for (int f = 1; f <= rr; ++f) {
      const BigInt direct = b_count_direct(m, f);
      const BigInt recursive = b_count_recursive(m, f);
      const BigInt expected = catalan_triangle(rr - 1, rr - f);
      total += direct;
      r.check(direct == recursive && direct == expected, [&] {
        return "b(" + std::to_string(m) + "," + std::to_string(f) + "): direct " + direct.str() +
               ", recursive " + recursive.str() + ", triangle " + expected.str();
      });
    }
    r.check(total == catalan(rr), [&] { return "b(" + std::to_string(m) + ",.) does not sum to a Catalan number"; });
  }
  for (int m = 1; m + 1 <= n; m += 2)
    for (int f = 0; f <= (m + 1) / 2; ++f) {
      const BigInt odd = b_count_direct(m, f), even = b_count_direct(m + 1, f);
      r.check(odd == even, [&] {
        return "b(" + std::to_string(m) + "," + std::to_string(f) + ") = " + odd.str() + " but b(" +
               std::to_string(m + 1) + "," + std::to_string(f) + ") = " + even.str();
      });
    }
  return r;
}

// Maximal-rank counts are Catalan numbers for every n' <= n.
inline SuiteResult catalan_counts(int n) {
  require_n(n, 1, kCensusMaxN, "catalan");
  SuiteResult r = start("catalan", n, 0);
  for (int m = 1; m <= n; ++m) {
    const BigInt count = max_rank_count(m);
    r.check(count == catalan((m + 1) / 2), [&] {
      return "n=" + std::to_string(m) + ": " + count.str() + " maximal-rank forms";
    });
  }
  return r;
}

// Cover labels: binomial total, injectivity, and round trips through pi and pi_inv.
inline SuiteResult cover_labels(int n) {
  require_n(n, 0, 12, "covers");
  SuiteResult r = start("covers", n, 0);
  std::set<CoverLabel> seen;
  long long total = 0;
  for (const auto& q : enumerate_max_rank(n))
    for (const auto& c : covers(q)) {
      ++total;
      r.check(seen.insert(c).second, [&] { return "label " + to_string(c) + " repeats"; });
    }
  r.check(total == binomial(n, n / 2), [&] {
    return std::to_string(total) + " covers, expected " + std::to_string(binomial(n, n / 2));
  });
  for (const auto& m : all_cover_labels(n)) {
    const ZElement z = pi_inv(m);
    r.check(pi(z) == m && in_q(z.q) && static_cast<int>(z.eps.size()) == tag_count(z.q),
            [&] { return "round trip fails at " + to_string(m); });
  }
  return r;
}

// Involution, commutation and braid laws of the simple transpositions on labels.
inline SuiteResult weyl_laws(int n) {
  require_n(n, 1, 12, "weyl");
  SuiteResult r = start("weyl", n, 0);
  auto s = [&](int i, const CoverLabel& c) { return weyl_apply(simple_transposition(n, i), c); };
  for (const auto& m : all_cover_labels(n))
    for (int i = 1; i < n; ++i) {
      r.check(s(i, s(i, m)) == m, [&] { return "s" + std::to_string(i) + " is not an involution at " + to_string(m); });
      for (int j = i + 2; j < n; ++j) {
        r.check(s(i, s(j, m)) == s(j, s(i, m)), [&] {
          return "s" + std::to_string(i) + ", s" + std::to_string(j) + " do not commute at " + to_string(m);
        });
      }
      if (i + 1 < n) {
        r.check(s(i, s(i + 1, s(i, m))) == s(i + 1, s(i, s(i + 1, m))),
                [&] { return "braid law fails for s" + std::to_string(i) + " at " + to_string(m); });
      }
    }
  return r;
}

// Every label and every i: the action case matches the computed parabolic type.
inline SuiteResult knop(int n) {
  require_n(n, 1, 10, "knop");
  SuiteResult r = start("knop", n, 0);
  for (const auto& m : all_cover_labels(n))
    for (int i = 1; i < n; ++i) {
      const KnopRecord rec = knop_case(m, i);
      r.check(rec.ok(), [&] {
        return to_string(m) + " i=" + std::to_string(i) + " " + knop_case_name(rec.kind) + ": required " +
               phi_name(rec.required) + ", computed " + phi_name(rec.computed) +
               (rec.target_ok ? "" : ", wrong target");
      });
    }
  return r;
}

// Brute-force P_i-orbits against the decomposition. When a representative's normalize fiber
// splits into several orbits over a field that is not quadratically closed, only the images
// are compared.
inline SuiteResult parabolic(int n, int level) {
  require_n(n, 2, level == 0 ? 4 : 3, "parabolic");
  SuiteResult r = start("parabolic", n, level);
  const auto table = oracle::enumerate_b_orbits(n, level);
  const oracle::Space space(n, level);
  std::map<std::string, int> fiber_size;
  std::vector<std::string> image_of(table.orbit_count());
  for (std::size_t id = 0; id < table.orbit_count(); ++id) {
    image_of[id] = to_string(normalize(space.decode(table.representative[id])).nf);
    ++fiber_size[image_of[id]];
  }
  for (const auto& q : enumerate_normal_forms(n))
    for (int i = 1; i < n; ++i) {
      const auto d = p_orbit_decompose(q, i);
      const auto ids = oracle::parabolic_bruteforce(table, q.as_form(), i);
      std::set<std::string> images, reps;
      for (auto id : ids) images.insert(image_of[id]);
      std::set<std::uint32_t> rep_ids;
      bool single = true;
      for (const auto& rep : d.reps) {
        reps.insert(to_string(rep));
        rep_ids.insert(oracle::orbit_id(table, rep.as_form()));
        single = single && fiber_size.at(to_string(rep)) == 1;
      }
      const auto where = [&] { return to_string(q) + " i=" + std::to_string(i); };
      r.check(images == reps, [&] { return where() + ": brute-force orbit meets other normal forms"; });
      r.check(rep_ids.size() == d.reps.size(), [&] { return where() + ": representatives share an orbit"; });
      if (single) r.check(rep_ids == ids, [&] { return where() + ": orbit is not the union"; });
    }
  return r;
}

// Presentation solutions against brute force, the cardinality fit, and additivity of the tags.
inline SuiteResult stabilizers(int n, int level) {
  require_n(n, 1, level == 0 ? 5 : 4, "stabilizers");
  SuiteResult r = start("stabilizers", n, level);
  auto sorted = [](std::vector<oracle::Matrix> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  for (const auto& q : enumerate_max_rank(n)) {
    const auto p = stabilizer_presentation(q);
    const auto brute = sorted(oracle::stabilizer_bruteforce(q.as_form(), level));
    r.check(instantiate(p, level) == brute, [&] { return to_string(q) + ": presentation differs from brute force"; });
    if (level == 0) {
      const auto fit = oracle::stabilizer_cardinality_fit(q.as_form(), to_zero_set(theorem2_constraints(q)));
      r.check(fit.exact && static_cast<long long>(fit.c) == component_count(q), [&] {
        return to_string(q) + ": fit c=" + std::to_string(fit.c) + ", expected " + std::to_string(component_count(q));
      });
    }
    std::vector<std::vector<std::uint8_t>> tags;
    for (const auto& u : brute) tags.push_back(stabilizer_phi(p, u));
    std::set<std::vector<std::uint8_t>> realized(tags.begin(), tags.end());
    for (std::size_t a = 0; a < brute.size(); ++a)
      for (std::size_t b = 0; b < brute.size(); ++b) {
        auto sum = tags[a];
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] ^= tags[b][k];
        r.check(stabilizer_phi(p, oracle::product(brute[a], brute[b])) == sum,
                [&] { return to_string(q) + ": tags are not additive"; });
      }
    r.check(static_cast<long long>(realized.size()) == component_count(q),
            [&] { return to_string(q) + ": not every tag vector is realized"; });
  }
  return r;
}

// Torus image of the stabilizer over F_4 has 3^(n - brank) elements.
inline SuiteResult brank_projection(int n) {
  require_n(n, 0, 4, "brank");
  SuiteResult r = start("brank", n, 1);
  for (const auto& q : enumerate_normal_forms(n)) {
    std::uint64_t expected = 1;
    for (int k = 0; k < n - brank(q); ++k) expected *= 3;
    const auto got = oracle::torus_projection_size(q.as_form(), 1);
    r.check(got == expected, [&] {
      return to_string(q) + ": torus image " + std::to_string(got) + ", expected " + std::to_string(expected);
    });
  }
  return r;
}

inline SuiteResult nondegeneracy(int n, int level = 0) {
  require_n(n, 0, 8, "nondegeneracy");
  SuiteResult r = start("nondegeneracy", n, level);
  for (const auto& q : enumerate_normal_forms(n)) {
    const bool brute = oracle::nondegeneracy_bruteforce(q.as_form(), level).nondegenerate;
    r.check(brute == is_nondegenerate(q), [&] {
      return to_string(q) + ": predicate says " + (is_nondegenerate(q) ? "yes" : "no");
    });
  }
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"fibers", "invariance", "triangle", "catalan",
                                                 "covers", "weyl",       "knop",     "parabolic",
                                                 "stabilizers", "brank", "nondegeneracy"};
  return names;
}

inline int default_level(const std::string& suite, int n) {
  if (suite == "invariance" || suite == "brank") return 1;
  if (suite == "parabolic") return n <= 3 ? 1 : 0;
  return 0;
}

// level < 0 picks the suite default.
inline SuiteResult run_suite(const std::string& suite, int n, int level = -1) {
  if (level < 0) level = default_level(suite, n);
  if (level > 1 && suite != "invariance") throw SizeGuardExceeded("oracle suites run over F_2 or F_4 only");
  if (suite == "fibers") return fibers(n, level);
  if (suite == "invariance") return invariance(n, level);
  if (suite == "triangle") return triangle(n);
  if (suite == "catalan") return catalan_counts(n);
  if (suite == "covers") return cover_labels(n);
  if (suite == "weyl") return weyl_laws(n);
  if (suite == "knop") return knop(n);
  if (suite == "parabolic") return parabolic(n, level);
  if (suite == "stabilizers") return stabilizers(n, level);
  if (suite == "brank") return brank_projection(n);
  if (suite == "nondegeneracy") return nondegeneracy(n, level);
  throw InvalidInput("unknown suite: " + suite);
}

inline std::string summary_line(const SuiteResult& r) {
  return std::string(r.ok() ? "PASS" : "FAIL") + " " + r.suite + " n=" + std::to_string(r.n) +
         " level=" + std::to_string(r.level) + ": " + std::to_string(r.checked) + " checked, " +
         std::to_string(r.failure_count) + " failed";
}

}  // namespace borelq::verify
