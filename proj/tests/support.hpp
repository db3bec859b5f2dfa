#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "borelq/random.hpp"

namespace borelq::testing {

using borelq::random_borel;
using borelq::random_element;
using borelq::random_form;
using borelq::random_sparse_form;
using borelq::random_unit;

inline GroupElement random_invertible(std::mt19937_64& rng, int n, int level) {
  while (true) {
    std::vector<FieldElement> e(static_cast<std::size_t>(n) * n);
    for (auto& x : e) x = random_element(rng, level);
    try {
      return GroupElement::from_entries(n, std::move(e));
    } catch (const InvalidInput&) {
    }
  }
}

// Every form over F_2 in n variables, indexed by the bits of code over monomials in lex order.
inline std::vector<QuadraticForm> all_f2_forms(int n) {
  std::vector<std::pair<int, int>> monos;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) monos.emplace_back(i, j);
  std::vector<QuadraticForm> out;
  const std::uint64_t total = std::uint64_t{1} << monos.size();
  out.reserve(total);
  for (std::uint64_t code = 0; code < total; ++code) {
    QuadraticForm q(n);
    for (std::size_t k = 0; k < monos.size(); ++k)
      if ((code >> k) & 1) q.set(monos[k].first, monos[k].second, FieldElement::one());
    out.push_back(q);
  }
  return out;
}

// Every matrix over F_2 of the given shape; borel restricts to unit upper-triangular.
inline std::vector<GroupElement> all_f2_matrices(int n, bool borel) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!borel || i < j) slots.emplace_back(i, j);
  std::vector<GroupElement> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << slots.size()); ++code) {
    std::vector<FieldElement> e(static_cast<std::size_t>(n) * n);
    if (borel)
      for (int i = 0; i < n; ++i) e[i * n + i] = FieldElement::one();
    for (std::size_t k = 0; k < slots.size(); ++k)
      if ((code >> k) & 1) e[slots[k].first * n + slots[k].second] = FieldElement::one();
    try {
      out.push_back(GroupElement::from_entries(n, std::move(e),
                                               borel ? GroupKind::borel : GroupKind::general));
    } catch (const InvalidInput&) {
    }
  }
  return out;
}

}  // namespace borelq::testing
