#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "borelq/errors.hpp"
#include "borelq/normal_form.hpp"

namespace borelq {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kCensusMaxN = 12;
inline constexpr int kCountMaxN = 16;

namespace detail {

// Left-to-right scan: every position is unused, a pure square, an arc opener, or an arc closer.
class NormalFormEnumerator {
 public:
  NormalFormEnumerator(int n, const std::function<void(const NormalForm&)>& visit)
      : n_(n), visit_(visit) {}

  void run() { step(1); }

 private:
  struct Open {
    int i;
    bool eps;
    bool inner_eps;  // some arc nested strictly inside carries a square
  };

  void step(int p) {
    if (p > n_) {
      if (open_.empty()) visit_(NormalForm(n_, comps_));
      return;
    }
    // Remaining positions must be able to close every open arc.
    if (static_cast<int>(open_.size()) > n_ - p + 1) return;

    step(p + 1);

    if (square_at_ == 0) {
      square_at_ = p;
      comps_.push_back({p, p, true, false});
      step(p + 1);
      comps_.pop_back();
      square_at_ = 0;
    }

    for (bool eps : {false, true}) {
      if (eps && square_at_ != 0) continue;
      open_.push_back({p, eps, false});
      step(p + 1);
      open_.pop_back();
    }

    for (std::size_t k = 0; k < open_.size(); ++k) {
      const Open arc = open_[k];
      if (arc.eps && arc.inner_eps) continue;
      std::vector<Open> saved = open_;
      open_.erase(open_.begin() + static_cast<long>(k));
      if (arc.eps || arc.inner_eps) {
        for (auto& outer : open_)
          if (outer.i < arc.i) outer.inner_eps = true;
      }
      bool ok = true;
      for (const auto& outer : open_)
        if (outer.i < arc.i && outer.eps && outer.inner_eps) ok = false;
      if (ok) {
        comps_.push_back({arc.i, p, arc.eps, true});
        step(p + 1);
        comps_.pop_back();
      }
      open_ = std::move(saved);
    }
  }

  int n_;
  const std::function<void(const NormalForm&)>& visit_;
  std::vector<Open> open_;
  std::vector<NormalComponent> comps_;
  int square_at_ = 0;
};

}  // namespace detail

// Streams every normal form in n variables exactly once.
inline void for_each_normal_form(int n, const std::function<void(const NormalForm&)>& visit) {
  if (n < 0) throw InvalidInput("negative number of variables");
  if (n > kCensusMaxN) throw SizeGuardExceeded("census is limited to n <= 12");
  detail::NormalFormEnumerator(n, visit).run();
}

inline std::vector<NormalForm> enumerate_normal_forms(int n) {
  std::vector<NormalForm> out;
  for_each_normal_form(n, [&](const NormalForm& nf) { out.push_back(nf); });
  sort_canonical(out);
  return out;
}

// Q_n from Dyck words: openers are matched to closers first-in first-out, and for odd n the
// arc ending at the phantom position n+1 becomes the pure square.
inline std::vector<NormalForm> enumerate_max_rank(int n) {
  if (n < 0) throw InvalidInput("negative number of variables");
  if (n > 2 * kCountMaxN) throw SizeGuardExceeded("max-rank enumeration is limited to n <= 32");
  const int big_n = n + n % 2;
  std::vector<NormalForm> out;
  std::vector<int> opens;
  std::vector<std::pair<int, int>> pairs;
  std::function<void(int, int, std::size_t)> rec = [&](int p, int height, std::size_t head) {
    if (p > big_n) {
      std::vector<NormalComponent> comps;
      for (const auto& [i, j] : pairs) {
        if (j == n + 1) comps.push_back({i, i, true, false});
        else comps.push_back({i, j, true, true});
      }
      out.emplace_back(n, std::move(comps));
      return;
    }
    const int left = big_n - p + 1;
    if (height + 1 <= left - 1) {
      opens.push_back(p);
      rec(p + 1, height + 1, head);
      opens.pop_back();
    }
    if (height > 0) {
      pairs.emplace_back(opens[head], p);
      rec(p + 1, height - 1, head + 1);
      pairs.pop_back();
    }
  };
  rec(1, 0, 0);
  sort_canonical(out);
  return out;
}

inline BigInt catalan(int m) {
  if (m < 0) return 0;
  BigInt c = 1;
  for (int k = 0; k < m; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

// Rows 0..n_max of the triangle; entry [n][k] for 0 <= k <= n.
inline std::vector<std::vector<BigInt>> catalan_triangle_table(int n_max) {
  std::vector<std::vector<BigInt>> t;
  for (int n = 0; n <= n_max; ++n) {
    std::vector<BigInt> row(n + 1);
    row[0] = 1;
    for (int k = 1; k <= n; ++k) row[k] = row[k - 1] + (k <= n - 1 ? t[n - 1][k] : BigInt(0));
    t.push_back(std::move(row));
  }
  return t;
}

inline BigInt catalan_triangle(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  return catalan_triangle_table(n)[n][k];
}

inline BigInt max_rank_count(int n) {
  BigInt count = 0;
  for_each_normal_form(n, [&](const NormalForm& nf) {
    if (brank(nf) == n) ++count;
  });
  return count;
}

inline BigInt b_count_direct(int n, int f) {
  BigInt count = 0;
  for (const auto& q : enumerate_max_rank(n))
    if (cc(q) == f) ++count;
  return count;
}

inline BigInt b_count_recursive(int n, int f) {
  if (n < 0) return 0;
  if (n % 2) return b_count_recursive(n + 1, f);
  const int r = n / 2;
  if (r == 0) return f == 0 ? 1 : 0;
  if (f < 1 || f > r) return 0;
  if (f == r) return 1;
  BigInt sum = 0;
  for (int l = 1; l <= r - f + 1; ++l) sum += catalan(l - 1) * b_count_recursive(n - 2 * l, f - 1);
  return sum;
}

struct TriangleReport {
  int n_max = 0;
  int checked = 0;
  std::vector<std::pair<int, int>> failures;
  bool ok() const { return failures.empty(); }
};

inline TriangleReport verify_triangle_identity(int n_max) {
  if (n_max > kCountMaxN) throw SizeGuardExceeded("triangle identity is limited to n <= 16");
  TriangleReport report;
  report.n_max = n_max;
  const auto t = catalan_triangle_table(std::max(n_max, 0));
  auto at = [&](int n, int k) { return k < 0 || k > n ? BigInt(0) : t[n][k]; };
  for (int n = 1; n <= n_max; ++n) {
    for (int k = 0; k < n; ++k) {
      BigInt rhs = 0;
      for (int l = 0; l <= k; ++l) rhs += at(l, l) * at(n - l - 1, k - l);
      ++report.checked;
      if (rhs != at(n, k)) report.failures.emplace_back(n, k);
    }
  }
  return report;
}

struct CensusRow {
  NormalForm nf;
  int brank = 0;
  bool nondegenerate = false;
  std::optional<int> cc;
};

inline std::vector<CensusRow> census(int n) {
  std::vector<CensusRow> rows;
  for (const auto& nf : enumerate_normal_forms(n)) {
    CensusRow row{nf, brank(nf), is_nondegenerate(nf), std::nullopt};
    if (in_q(nf)) row.cc = borelq::cc(nf);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string census_table(const std::vector<CensusRow>& rows) {
  std::size_t width = 4;
  for (const auto& r : rows) width = std::max(width, to_string(r.nf).size());
  std::string out = "form" + std::string(width - 4, ' ') + "  brank  nondeg  cc\n";
  for (const auto& r : rows) {
    const std::string text = to_string(r.nf);
    std::string brank_text = std::to_string(r.brank);
    out += text + std::string(width - text.size(), ' ') + "  " + brank_text +
           std::string(5 - std::min<std::size_t>(5, brank_text.size()), ' ') + "  " +
           (r.nondegenerate ? "yes   " : "no    ") + "  " + (r.cc ? std::to_string(*r.cc) : "-") +
           "\n";
  }
  return out;
}

}  // namespace borelq
