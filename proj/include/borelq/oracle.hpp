#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "borelq/errors.hpp"
#include "borelq/normal_form.hpp"
#include "borelq/orbit_census.hpp"
#include "borelq/quadratic_form.hpp"

// Brute force over F_2 (level 0) and F_4 (level 1) with its own table arithmetic.
// Elements of F_4 are coded a + 2b for a + b w, w^2 = w + 1.
namespace borelq::oracle {

using Code = std::uint64_t;

inline constexpr double kLog2Guard = 36.0;

namespace f4 {

inline std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  static constexpr std::uint8_t table[4][4] = {
      {0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  return table[a][b];
}
inline std::uint8_t inv(std::uint8_t a) {
  static constexpr std::uint8_t table[4] = {0, 1, 3, 2};
  return table[a];
}

}  // namespace f4

inline int field_size(int level) {
  if (level < 0 || level > 1) throw InvalidInput("oracle supports levels 0 and 1 only");
  return level == 0 ? 2 : 4;
}

// Coefficient tables c[i][j] (1-based, i <= j) packed at 1 or 2 bits per monomial in lex order.
class Space {
 public:
  Space(int n, int level) : n_(n), level_(level), bits_(level + 1) {
    field_size(level);
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        pairs_.emplace_back(i, j);
        ++monos_;
      }
    if (monos_ * bits_ > 40) throw SizeGuardExceeded("form space too large for packing");
  }

  int n() const { return n_; }
  int level() const { return level_; }
  int monomials() const { return monos_; }
  Code size() const { return Code{1} << (monos_ * bits_); }
  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

  using Table = std::vector<std::uint8_t>;  // (n+1)^2 entries, only i <= j used

  Table unpack(Code code) const {
    Table c((n_ + 1) * (n_ + 1), 0);
    const Code mask = (Code{1} << bits_) - 1;
    for (int k = 0; k < monos_; ++k) {
      const auto [i, j] = pairs_[k];
      c[i * (n_ + 1) + j] = static_cast<std::uint8_t>((code >> (k * bits_)) & mask);
    }
    return c;
  }

  Code pack(const Table& c) const {
    Code code = 0;
    for (int k = 0; k < monos_; ++k) {
      const auto [i, j] = pairs_[k];
      code |= Code{c[i * (n_ + 1) + j]} << (k * bits_);
    }
    return code;
  }

  std::uint8_t& at(Table& c, int i, int j) const {
    if (i > j) std::swap(i, j);
    return c[i * (n_ + 1) + j];
  }

  Code encode(const QuadraticForm& q) const {
    if (q.n() != n_) throw InvalidInput("dimension mismatch");
    Table c((n_ + 1) * (n_ + 1), 0);
    for (const auto& [m, v] : q.terms()) {
      if (v.min_level() > level_) throw InvalidInput("coefficient outside the oracle field");
      c[m.first * (n_ + 1) + m.second] = static_cast<std::uint8_t>(v.bits());
    }
    return pack(c);
  }

  QuadraticForm decode(Code code) const {
    QuadraticForm q(n_);
    const Table c = unpack(code);
    for (const auto& [i, j] : pairs_) {
      const std::uint8_t v = c[i * (n_ + 1) + j];
      if (v) q.set(i, j, FieldElement::from_bits(v, level_));
    }
    return q;
  }

  // x_k -> x_k + a x_l with k < l.
  Code transvect(Code code, int k, int l, std::uint8_t a) const {
    const Table c = unpack(code);
    Table out = c;
    const std::uint8_t ckk = c[k * (n_ + 1) + k];
    at(out, l, l) ^= f4::mul(ckk, f4::mul(a, a));
    for (int j = 1; j <= n_; ++j) {
      if (j == k) continue;
      const std::uint8_t ckj = j > k ? c[k * (n_ + 1) + j] : c[j * (n_ + 1) + k];
      if (ckj) at(out, l, j) ^= f4::mul(ckj, a);
    }
    return pack(out);
  }

  // x_k -> u x_k.
  Code scale(Code code, int k, std::uint8_t u) const {
    Table c = unpack(code);
    for (int j = 1; j <= n_; ++j) {
      std::uint8_t& v = at(c, k, j);
      v = j == k ? f4::mul(v, f4::mul(u, u)) : f4::mul(v, u);
    }
    return pack(c);
  }

  // x_i <-> x_{i+1}.
  Code swap(Code code, int i) const {
    const Table c = unpack(code);
    Table out((n_ + 1) * (n_ + 1), 0);
    auto sigma = [&](int t) { return t == i ? i + 1 : (t == i + 1 ? i : t); };
    for (const auto& [a, b] : pairs_) at(out, sigma(a), sigma(b)) = c[a * (n_ + 1) + b];
    return pack(out);
  }

 private:
  int n_;
  int level_;
  int bits_;
  int monos_ = 0;
  std::vector<std::pair<int, int>> pairs_;
};

inline double log2_borel_order(int n, int level) {
  const double f = field_size(level);
  return n * std::log2(f - 1) + 0.5 * n * (n - 1) * std::log2(f);
}

inline void check_orbit_guard(int n, int level) {
  const double log_v = (level + 1.0) * n * (n + 1) / 2.0;
  if (log_v + log2_borel_order(n, level) > kLog2Guard + 1e-9) {
    throw SizeGuardExceeded("|V|*|B| exceeds 2^36 for n=" + std::to_string(n) + ", level " +
                            std::to_string(level));
  }
}

struct OrbitTable {
  int n = 0;
  int level = 0;
  std::vector<std::uint32_t> orbit_of;      // code -> orbit id
  std::vector<Code> representative;         // orbit id -> least code
  std::vector<std::uint32_t> orbit_size;

  std::size_t orbit_count() const { return representative.size(); }
};

inline OrbitTable enumerate_b_orbits(int n, int level) {
  check_orbit_guard(n, level);
  const Space space(n, level);
  const Code total = space.size();
  std::vector<std::uint32_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0u);
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](Code a, Code b) {
    std::uint32_t ra = find(static_cast<std::uint32_t>(a)), rb = find(static_cast<std::uint32_t>(b));
    if (ra == rb) return;
    if (ra < rb) parent[rb] = ra;
    else parent[ra] = rb;
  };
  for (Code code = 0; code < total; ++code) {
    for (int k = 1; k <= n; ++k) {
      for (int l = k + 1; l <= n; ++l) unite(code, space.transvect(code, k, l, 1));
      if (level == 1) unite(code, space.scale(code, k, 2));
    }
  }
  OrbitTable table;
  table.n = n;
  table.level = level;
  table.orbit_of.assign(total, 0);
  std::map<std::uint32_t, std::uint32_t> id_of_root;
  for (Code code = 0; code < total; ++code) {
    const std::uint32_t root = find(static_cast<std::uint32_t>(code));
    auto [it, fresh] = id_of_root.emplace(root, static_cast<std::uint32_t>(table.representative.size()));
    if (fresh) {
      table.representative.push_back(code);
      table.orbit_size.push_back(0);
    }
    table.orbit_of[code] = it->second;
    ++table.orbit_size[it->second];
  }
  return table;
}

inline std::uint32_t orbit_id(const OrbitTable& table, const QuadraticForm& q) {
  return table.orbit_of[Space(table.n, table.level).encode(q)];
}

struct FiberReport {
  int n = 0;
  int level = 0;
  std::size_t forms_checked = 0;
  std::size_t orbits = 0;
  std::size_t distinct_images = 0;
  std::size_t census_count = 0;
  std::size_t witness_failures = 0;
  std::vector<std::string> violations;  // orbits on which normalize is not constant

  bool ok() const {
    return violations.empty() && witness_failures == 0 && distinct_images == census_count;
  }
};

// normalize must be constant on every orbit, and hit every normal form exactly once.
inline FiberReport fiber_check(int n, int level) {
  const OrbitTable table = enumerate_b_orbits(n, level);
  const Space space(n, level);
  FiberReport report;
  report.n = n;
  report.level = level;
  report.orbits = table.orbit_count();
  std::vector<std::string> image_of_orbit(table.orbit_count());
  std::vector<bool> seen(table.orbit_count(), false);
  std::set<std::string> images;
  for (Code code = 0; code < space.size(); ++code) {
    const QuadraticForm q = space.decode(code);
    const NormalizeResult r = normalize(q);
    ++report.forms_checked;
    if (act(r.witness, q) != r.nf.as_form()) ++report.witness_failures;
    const std::string text = to_string(r.nf);
    const std::uint32_t id = table.orbit_of[code];
    if (!seen[id]) {
      seen[id] = true;
      image_of_orbit[id] = text;
    } else if (image_of_orbit[id] != text) {
      report.violations.push_back(to_string(q) + " -> " + text + " but orbit gives " +
                                  image_of_orbit[id]);
    }
    images.insert(text);
  }
  report.distinct_images = images.size();
  report.census_count = enumerate_normal_forms(n).size();
  return report;
}

// Dense n x n matrix over F_4 codes, row-major, 0-based storage.
struct Matrix {
  int n = 0;
  std::vector<std::uint8_t> e;

  std::uint8_t operator()(int i, int j) const { return e[(i - 1) * n + (j - 1)]; }
  std::uint8_t& operator()(int i, int j) { return e[(i - 1) * n + (j - 1)]; }
  friend bool operator<(const Matrix& a, const Matrix& b) { return a.e < b.e; }
  friend bool operator==(const Matrix& a, const Matrix& b) { return a.e == b.e; }
};

inline Matrix product(const Matrix& a, const Matrix& b) {
  Matrix out{a.n, std::vector<std::uint8_t>(a.e.size(), 0)};
  for (int i = 1; i <= a.n; ++i)
    for (int k = 1; k <= a.n; ++k)
      if (a(i, k))
        for (int j = 1; j <= a.n; ++j) out(i, j) ^= f4::mul(a(i, k), b(k, j));
  return out;
}

inline GroupElement to_group_element(const Matrix& m, int level) {
  std::vector<FieldElement> e;
  for (auto v : m.e) e.push_back(FieldElement::from_bits(v, level));
  return GroupElement::from_entries(m.n, std::move(e));
}

using ZeroSet = std::set<std::pair<int, int>>;

// Column-major backtracking over upper-triangular matrices with b q = q. After column j is
// fixed, every coefficient c'_{a,b} with b <= j is determined and compared.
inline void for_each_stabilizer(const QuadraticForm& q, int level,
                                const std::function<void(const Matrix&)>& visit,
                                const ZeroSet& forced_zeros = {}) {
  const int n = q.n();
  // Pruning constraints buy one more variable over F_4.
  const int f4_limit = forced_zeros.empty() ? 4 : 5;
  if ((level == 0 && n > 6) || (level == 1 && n > f4_limit)) {
    throw SizeGuardExceeded("stabilizer search is limited to n <= 6 over F_2, n <= 4 over F_4");
  }
  const Space space(n, level);
  const Space::Table c = space.unpack(space.encode(q));
  auto coef = [&](int s, int t) { return c[s * (n + 1) + t]; };
  const int fsize = field_size(level);
  Matrix g{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n) * n, 0)};

  // Coefficient of x_a x_b (a <= b) in b q; needs columns a and b only.
  auto image = [&](int a, int b) {
    std::uint8_t v = 0;
    for (int s = 1; s <= b; ++s)
      for (int t = s; t <= b; ++t) {
        const std::uint8_t cst = coef(s, t);
        if (!cst) continue;
        const std::uint8_t w = a == b ? f4::mul(g(s, a), g(t, a))
                                      : f4::mul(g(s, a), g(t, b)) ^ f4::mul(g(s, b), g(t, a));
        v ^= f4::mul(cst, w);
      }
    return v;
  };

  std::function<void(int, int)> rec = [&](int col, int row) {
    if (col > n) {
      visit(g);
      return;
    }
    if (row > col) {
      for (int a = 1; a <= col; ++a)
        if (image(a, col) != coef(a, col)) return;
      rec(col + 1, 1);
      return;
    }
    if (row != col && forced_zeros.count({row, col})) {
      g(row, col) = 0;
      rec(col, row + 1);
      return;
    }
    for (int v = row == col ? 1 : 0; v < fsize; ++v) {
      g(row, col) = static_cast<std::uint8_t>(v);
      rec(col, row + 1);
    }
    g(row, col) = 0;
  };
  rec(1, 1);
}

inline std::vector<Matrix> stabilizer_bruteforce(const QuadraticForm& q, int level,
                                                 const ZeroSet& forced_zeros = {}) {
  std::vector<Matrix> out;
  for_each_stabilizer(q, level, [&](const Matrix& m) { out.push_back(m); }, forced_zeros);
  return out;
}

inline std::uint64_t stabilizer_count(const QuadraticForm& q, int level, const ZeroSet& forced_zeros = {}) {
  std::uint64_t count = 0;
  for_each_stabilizer(q, level, [&](const Matrix&) { ++count; }, forced_zeros);
  return count;
}

// |B_q(F_{2^k})| = c 2^{k d} for k = 1, 2; exact when both c and d come out integral.
struct CardinalityFit {
  std::uint64_t count_f2 = 0;
  std::uint64_t count_f4 = 0;
  bool exact = false;
  std::uint64_t c = 0;
  int d = 0;
};

inline CardinalityFit stabilizer_cardinality_fit(const QuadraticForm& q, const ZeroSet& forced_zeros = {}) {
  CardinalityFit fit;
  fit.count_f2 = stabilizer_count(q, 0, forced_zeros);
  fit.count_f4 = stabilizer_count(q, 1, forced_zeros);
  if (fit.count_f4 % fit.count_f2 == 0) {
    const std::uint64_t ratio = fit.count_f4 / fit.count_f2;
    if ((ratio & (ratio - 1)) == 0) {
      int d = 0;
      while ((std::uint64_t{1} << d) < ratio) ++d;
      if (fit.count_f2 % (std::uint64_t{1} << d) == 0) {
        fit.d = d;
        fit.c = fit.count_f2 >> d;
        fit.exact = true;
      }
    }
  }
  return fit;
}

inline std::uint64_t torus_projection_size(const QuadraticForm& q, int level) {
  std::set<std::vector<std::uint8_t>> diagonals;
  for_each_stabilizer(q, level, [&](const Matrix& m) {
    std::vector<std::uint8_t> d;
    for (int i = 1; i <= m.n; ++i) d.push_back(m(i, i));
    diagonals.insert(std::move(d));
  });
  return diagonals.size();
}

// B-orbit ids met by the P_i-orbit of q: close the orbit of q under x_i <-> x_{i+1}.
inline std::set<std::uint32_t> parabolic_bruteforce(const OrbitTable& table, const QuadraticForm& q, int i) {
  if (i < 1 || i >= table.n) throw InvalidInput("reflection index out of range");
  const Space space(table.n, table.level);
  std::vector<std::vector<Code>> members(table.orbit_count());
  for (Code code = 0; code < space.size(); ++code) members[table.orbit_of[code]].push_back(code);
  std::set<std::uint32_t> found{table.orbit_of[space.encode(q)]};
  std::vector<std::uint32_t> frontier(found.begin(), found.end());
  while (!frontier.empty()) {
    const std::uint32_t id = frontier.back();
    frontier.pop_back();
    for (Code code : members[id]) {
      const std::uint32_t next = table.orbit_of[space.swap(code, i)];
      if (found.insert(next).second) frontier.push_back(next);
    }
  }
  return found;
}

inline std::set<std::uint32_t> parabolic_bruteforce(const QuadraticForm& q, int i, int level) {
  if ((level == 1 && q.n() > 3) || (level == 0 && q.n() > 4)) {
    throw SizeGuardExceeded("parabolic closure is limited to n <= 3 over F_4, n <= 4 over F_2");
  }
  return parabolic_bruteforce(enumerate_b_orbits(q.n(), level), q, i);
}

struct RadicalReport {
  bool nondegenerate = false;
  int radical_dim = 0;
  std::vector<std::vector<std::uint8_t>> zero_vectors;  // nonzero radical vectors with q(v) = 0
};

// Radical of the polar form, then q on every nonzero radical vector.
inline RadicalReport nondegeneracy_bruteforce(const QuadraticForm& q, int level) {
  const int n = q.n();
  if (n > 8) throw SizeGuardExceeded("nondegeneracy check is limited to n <= 8");
  const int fsize = field_size(level);
  std::vector<std::uint8_t> c((n + 1) * (n + 1), 0);
  for (const auto& [m, v] : q.terms()) {
    if (v.min_level() > level) throw InvalidInput("coefficient outside the oracle field");
    c[m.first * (n + 1) + m.second] = static_cast<std::uint8_t>(v.bits());
  }
  auto coef = [&](int s, int t) { return s <= t ? c[s * (n + 1) + t] : c[t * (n + 1) + s]; };
  std::vector<std::vector<std::uint8_t>> m(n, std::vector<std::uint8_t>(n, 0));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) m[i - 1][j - 1] = coef(i, j);
  // Row reduce to find a kernel basis.
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int p = -1;
    for (int r = rank; r < n; ++r)
      if (m[r][col]) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(m[p], m[rank]);
    const std::uint8_t pinv = f4::inv(m[rank][col]);
    for (auto& v : m[rank]) v = f4::mul(v, pinv);
    for (int r = 0; r < n; ++r) {
      if (r == rank || !m[r][col]) continue;
      const std::uint8_t f = m[r][col];
      for (int k = 0; k < n; ++k) m[r][k] ^= f4::mul(f, m[rank][k]);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<int> free_cols;
  for (int col = 0; col < n; ++col)
    if (std::find(pivot_col.begin(), pivot_col.end(), col) == pivot_col.end()) free_cols.push_back(col);
  std::vector<std::vector<std::uint8_t>> basis;
  for (int fc : free_cols) {
    std::vector<std::uint8_t> v(n, 0);
    v[fc] = 1;
    for (int r = 0; r < rank; ++r) v[pivot_col[r]] = m[r][fc];  // char 2: -x = x
    basis.push_back(v);
  }
  RadicalReport report;
  report.radical_dim = static_cast<int>(basis.size());
  std::uint64_t combos = 1;
  for (std::size_t k = 0; k < basis.size(); ++k) combos *= fsize;
  for (std::uint64_t code = 1; code < combos; ++code) {
    std::vector<std::uint8_t> v(n, 0);
    std::uint64_t rest = code;
    for (const auto& b : basis) {
      const auto a = static_cast<std::uint8_t>(rest % fsize);
      rest /= fsize;
      for (int k = 0; k < n; ++k) v[k] ^= f4::mul(a, b[k]);
    }
    std::uint8_t value = 0;
    for (int s = 1; s <= n; ++s)
      for (int t = s; t <= n; ++t) value ^= f4::mul(coef(s, t), f4::mul(v[s - 1], v[t - 1]));
    if (value == 0) report.zero_vectors.push_back(v);
  }
  report.nondegenerate = report.zero_vectors.empty();
  return report;
}

// Orbit size over the largest feasible field, as a dimension: log_|F| |B q|.
inline std::optional<double> orbit_dimension_estimate(const QuadraticForm& q) {
  const int n = q.n();
  int level = -1;
  if (n <= 3) level = 1;
  else if (n <= 6) level = 0;
  if (level < 0) return std::nullopt;
  const double log_b = log2_borel_order(n, level);
  const double log_stab = std::log2(static_cast<double>(stabilizer_count(q, level)));
  return (log_b - log_stab) / std::log2(static_cast<double>(field_size(level)));
}

}  // namespace borelq::oracle
