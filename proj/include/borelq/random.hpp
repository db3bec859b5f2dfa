#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "borelq/quadratic_form.hpp"

namespace borelq {

inline FieldElement random_element(std::mt19937_64& rng, int level) {
  const unsigned w = FieldElement::width(level);
  const std::uint64_t mask = w >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << w) - 1);
  return FieldElement::from_bits(rng() & mask, level);
}

inline FieldElement random_unit(std::mt19937_64& rng, int level) {
  while (true) {
    const FieldElement e = random_element(rng, level);
    if (!e.is_zero()) return e;
  }
}

inline QuadraticForm random_form(std::mt19937_64& rng, int n, int level) {
  QuadraticForm q(n);
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) q.set(i, j, random_element(rng, level));
  return q;
}

// Sparse random form: each monomial present with probability about one half.
inline QuadraticForm random_sparse_form(std::mt19937_64& rng, int n, int level) {
  QuadraticForm q(n);
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      if (rng() & 1) q.set(i, j, random_unit(rng, level));
  return q;
}

inline GroupElement random_borel(std::mt19937_64& rng, int n, int level) {
  std::vector<FieldElement> e(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      e[i * n + j] = i == j ? random_unit(rng, level) : random_element(rng, level);
  return GroupElement::from_entries(n, std::move(e), GroupKind::borel);
}

}  // namespace borelq
