#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "borelq/errors.hpp"
#include "borelq/tower_field.hpp"

namespace borelq {

using Monomial = std::pair<int, int>;  // (i, j) with i <= j, 1-based

// Lexicographic order on index pairs; std::pair already compares this way.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const { return a < b; }
};

class QuadraticForm {
 public:
  using Coefficients = std::map<Monomial, FieldElement, MonomialOrder>;

  QuadraticForm() = default;
  explicit QuadraticForm(int n) : n_(n) {
    if (n < 0) throw InvalidInput("negative number of variables");
  }

  int n() const { return n_; }
  const Coefficients& terms() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  std::size_t size() const { return coeffs_.size(); }

  FieldElement coef(int i, int j) const {
    const Monomial key = key_of(i, j);
    auto it = coeffs_.find(key);
    return it == coeffs_.end() ? FieldElement::zero() : it->second;
  }

  void set(int i, int j, const FieldElement& c) {
    const Monomial key = key_of(i, j);
    if (c.is_zero()) {
      coeffs_.erase(key);
    } else {
      coeffs_[key] = c;
    }
  }

  // Accumulate c into the coefficient of x_i x_j.
  void add(int i, int j, const FieldElement& c) {
    if (c.is_zero()) return;
    const Monomial key = key_of(i, j);
    auto it = coeffs_.find(key);
    if (it == coeffs_.end()) {
      coeffs_.emplace(key, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  std::set<int> ind() const {
    std::set<int> out;
    for (const auto& [m, c] : coeffs_) {
      out.insert(m.first);
      out.insert(m.second);
    }
    return out;
  }

  int max_level() const {
    int level = 0;
    for (const auto& [m, c] : coeffs_) level = std::max(level, c.level());
    return level;
  }

  friend bool operator==(const QuadraticForm& a, const QuadraticForm& b) {
    return a.n_ == b.n_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const QuadraticForm& a, const QuadraticForm& b) { return !(a == b); }

 private:
  Monomial key_of(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 1 || j > n_) {
      throw InvalidInput("index pair (" + std::to_string(i) + "," + std::to_string(j) +
                         ") outside 1.." + std::to_string(n_));
    }
    return {i, j};
  }

  int n_ = 0;
  Coefficients coeffs_;
};

inline std::string to_string(const QuadraticForm& q) {
  if (q.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : q.terms()) {
    if (!out.empty()) out += " + ";
    if (!c.is_one()) out += to_string(c) + "*";
    out += "x" + std::to_string(m.first);
    if (m.first == m.second) {
      out += "^2";
    } else {
      out += "*x" + std::to_string(m.second);
    }
  }
  return out;
}

namespace detail {

class FormParser {
 public:
  FormParser(std::string_view text, int n) : text_(text), n_(n) {}

  QuadraticForm parse() {
    std::vector<std::pair<Monomial, FieldElement>> terms;
    skip_ws();
    if (at_end()) throw ParseError("empty form", pos_);
    do {
      skip_ws();
      parse_term(terms);
      skip_ws();
    } while (accept('+'));
    if (!at_end()) throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    int n = n_;
    if (n < 0) {
      n = 0;
      for (const auto& [m, c] : terms) n = std::max(n, m.second);
    }
    QuadraticForm q(n);
    for (const auto& [m, c] : terms) {
      if (m.second > n) {
        throw InvalidInput("variable x" + std::to_string(m.second) + " outside 1.." +
                           std::to_string(n));
      }
      q.add(m.first, m.second, c);
    }
    return q;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char ch) {
    skip_ws();
    if (!at_end() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  int parse_var() {
    skip_ws();
    if (at_end() || text_[pos_] != 'x') throw ParseError("expected variable", pos_);
    ++pos_;
    const std::size_t start = pos_;
    long value = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1000000) throw ParseError("variable index too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected variable index", pos_);
    if (value < 1) throw ParseError("variable index must be positive", start);
    return static_cast<int>(value);
  }

  void parse_term(std::vector<std::pair<Monomial, FieldElement>>& terms) {
    skip_ws();
    FieldElement c = FieldElement::one();
    if (!at_end() && text_[pos_] != 'x') {
      const std::size_t start = pos_;
      while (!at_end() && text_[pos_] != '*' && text_[pos_] != '+' &&
             !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      c = parse_field_element(text_.substr(start, pos_ - start), start);
      skip_ws();
      if (at_end() || text_[pos_] == '+') {
        // A bare constant is only meaningful as the zero form.
        if (!c.is_zero()) throw ParseError("constant term in a quadratic form", start);
        return;
      }
      if (!accept('*')) throw ParseError("expected '*' after coefficient", pos_);
    }
    const int a = parse_var();
    skip_ws();
    if (!at_end() && text_[pos_] == '^') {
      ++pos_;
      skip_ws();
      if (at_end() || text_[pos_] != '2') throw ParseError("only squares are allowed", pos_);
      ++pos_;
      terms.push_back({{a, a}, c});
      return;
    }
    if (accept('*')) {
      const int b = parse_var();
      terms.push_back({{std::min(a, b), std::max(a, b)}, c});
      return;
    }
    throw ParseError("linear term in a quadratic form", pos_);
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// n < 0 infers the number of variables from the largest index.
inline QuadraticForm parse_form(std::string_view text, int n = -1) {
  return detail::FormParser(text, n).parse();
}

enum class GroupKind { borel, permutation, general };

class GroupElement {
 public:
  GroupElement() = default;

  static GroupElement identity(int n) {
    GroupElement g(n, GroupKind::borel);
    for (int i = 1; i <= n; ++i) g.at(i, i) = FieldElement::one();
    return g;
  }

  // Validates invertibility and the claimed kind.
  static GroupElement from_entries(int n, std::vector<FieldElement> entries,
                                   GroupKind kind = GroupKind::general) {
    if (entries.size() != static_cast<std::size_t>(n) * n) {
      throw InvalidInput("matrix entry count does not match n");
    }
    GroupElement g(n, kind);
    g.entries_ = std::move(entries);
    g.validate();
    return g;
  }

  // w[t-1] is the image of t; x_t is sent to x_{w(t)}.
  static GroupElement permutation(const std::vector<int>& w) {
    const int n = static_cast<int>(w.size());
    std::vector<bool> seen(n + 1, false);
    GroupElement g(n, GroupKind::permutation);
    for (int t = 1; t <= n; ++t) {
      const int image = w[t - 1];
      if (image < 1 || image > n || seen[image]) throw InvalidInput("not a permutation");
      seen[image] = true;
      g.at(t, image) = FieldElement::one();
    }
    return g;
  }

  static GroupElement simple_reflection(int n, int i) {
    if (i < 1 || i >= n) throw InvalidInput("reflection index out of range");
    std::vector<int> w(n);
    for (int t = 1; t <= n; ++t) w[t - 1] = t;
    std::swap(w[i - 1], w[i]);
    return permutation(w);
  }

  int n() const { return n_; }
  GroupKind kind() const { return kind_; }
  const FieldElement& operator()(int i, int j) const { return entries_[(i - 1) * n_ + (j - 1)]; }
  const std::vector<FieldElement>& entries() const { return entries_; }

  int max_level() const {
    int level = 0;
    for (const auto& e : entries_) level = std::max(level, e.level());
    return level;
  }

  bool is_upper_triangular() const {
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j < i; ++j)
        if (!(*this)(i, j).is_zero()) return false;
    return true;
  }

  bool is_identity() const {
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= n_; ++j)
        if ((*this)(i, j) != (i == j ? FieldElement::one() : FieldElement::zero())) return false;
    return true;
  }

  FieldElement determinant() const {
    std::vector<FieldElement> a = entries_;
    FieldElement det = FieldElement::one(max_level());
    for (int col = 0; col < n_; ++col) {
      int pivot = -1;
      for (int r = col; r < n_; ++r) {
        if (!a[r * n_ + col].is_zero()) {
          pivot = r;
          break;
        }
      }
      if (pivot < 0) return FieldElement::zero();
      if (pivot != col) {
        for (int c = 0; c < n_; ++c) std::swap(a[pivot * n_ + c], a[col * n_ + c]);
      }
      const FieldElement p = a[col * n_ + col];
      det = det * p;
      const FieldElement pinv = inv(p);
      for (int r = col + 1; r < n_; ++r) {
        const FieldElement f = a[r * n_ + col] * pinv;
        if (f.is_zero()) continue;
        for (int c = col; c < n_; ++c) a[r * n_ + c] = a[r * n_ + c] + f * a[col * n_ + c];
      }
    }
    return det;
  }

  GroupElement inverse() const {
    std::vector<FieldElement> a = entries_;
    std::vector<FieldElement> b = identity(n_).entries_;
    for (int col = 0; col < n_; ++col) {
      int pivot = -1;
      for (int r = col; r < n_; ++r) {
        if (!a[r * n_ + col].is_zero()) {
          pivot = r;
          break;
        }
      }
      if (pivot < 0) throw InvalidInput("singular matrix");
      for (int c = 0; c < n_; ++c) {
        std::swap(a[pivot * n_ + c], a[col * n_ + c]);
        std::swap(b[pivot * n_ + c], b[col * n_ + c]);
      }
      const FieldElement pinv = inv(a[col * n_ + col]);
      for (int c = 0; c < n_; ++c) {
        a[col * n_ + c] = a[col * n_ + c] * pinv;
        b[col * n_ + c] = b[col * n_ + c] * pinv;
      }
      for (int r = 0; r < n_; ++r) {
        if (r == col) continue;
        const FieldElement f = a[r * n_ + col];
        if (f.is_zero()) continue;
        for (int c = 0; c < n_; ++c) {
          a[r * n_ + c] = a[r * n_ + c] + f * a[col * n_ + c];
          b[r * n_ + c] = b[r * n_ + c] + f * b[col * n_ + c];
        }
      }
    }
    GroupElement g(n_, kind_);
    g.entries_ = std::move(b);
    return g;
  }

  friend GroupElement matmul(const GroupElement& g, const GroupElement& h) {
    if (g.n_ != h.n_) throw InvalidInput("dimension mismatch");
    const int n = g.n_;
    GroupKind kind = GroupKind::general;
    if (g.kind_ == h.kind_) kind = g.kind_;
    GroupElement out(n, kind);
    for (int i = 1; i <= n; ++i) {
      for (int k = 1; k <= n; ++k) {
        const FieldElement& a = g(i, k);
        if (a.is_zero()) continue;
        for (int j = 1; j <= n; ++j) out.at(i, j) += a * h(k, j);
      }
    }
    return out;
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  GroupElement(int n, GroupKind kind)
      : n_(n), kind_(kind), entries_(static_cast<std::size_t>(n) * n) {}

  FieldElement& at(int i, int j) { return entries_[(i - 1) * n_ + (j - 1)]; }

  void validate() const {
    if (kind_ == GroupKind::borel) {
      if (!is_upper_triangular()) throw InvalidInput("Borel element is not upper-triangular");
      for (int i = 1; i <= n_; ++i)
        if ((*this)(i, i).is_zero()) throw InvalidInput("Borel element has a zero diagonal entry");
      return;
    }
    if (kind_ == GroupKind::permutation) {
      for (int i = 1; i <= n_; ++i) {
        int ones = 0;
        for (int j = 1; j <= n_; ++j) {
          const FieldElement& e = (*this)(i, j);
          if (e.is_one()) ++ones;
          else if (!e.is_zero()) throw InvalidInput("permutation matrix entry is not 0/1");
        }
        if (ones != 1) throw InvalidInput("permutation matrix row without a single 1");
      }
    }
    if (determinant().is_zero()) throw InvalidInput("singular matrix");
  }

  int n_ = 0;
  GroupKind kind_ = GroupKind::general;
  std::vector<FieldElement> entries_;
};

// Right action: substitute x_t -> sum_j g_{t,j} x_j. act(gh, q) = act(h, act(g, q)).
inline QuadraticForm act(const GroupElement& g, const QuadraticForm& q) {
  if (g.n() != q.n()) throw InvalidInput("dimension mismatch between matrix and form");
  const int n = q.n();
  QuadraticForm out(n);
  for (const auto& [m, c] : q.terms()) {
    const auto [s, t] = m;
    for (int i = 1; i <= n; ++i) {
      const FieldElement& gs = g(s, i);
      if (gs.is_zero()) continue;
      const FieldElement cs = c * gs;
      for (int j = 1; j <= n; ++j) {
        const FieldElement& gt = g(t, j);
        if (gt.is_zero()) continue;
        out.add(i, j, cs * gt);
      }
    }
  }
  return out;
}

inline QuadraticForm permute(const std::vector<int>& w, const QuadraticForm& q) {
  if (static_cast<int>(w.size()) != q.n()) throw InvalidInput("permutation size mismatch");
  return act(GroupElement::permutation(w), q);
}

inline std::string to_string(const GroupElement& g) {
  std::vector<std::string> cells;
  std::size_t width = 1;
  for (int i = 1; i <= g.n(); ++i)
    for (int j = 1; j <= g.n(); ++j) {
      cells.push_back(to_string(g(i, j)));
      width = std::max(width, cells.back().size());
    }
  std::string out;
  for (int i = 0; i < g.n(); ++i) {
    out += "[";
    for (int j = 0; j < g.n(); ++j) {
      const std::string& cell = cells[i * g.n() + j];
      out += std::string(width - cell.size() + (j ? 1 : 0), ' ') + cell;
    }
    out += "]\n";
  }
  return out;
}

// Readable substitution list, e.g. "x1 -> x1 + w*x2".
inline std::string substitution_text(const GroupElement& g) {
  std::string out;
  for (int t = 1; t <= g.n(); ++t) {
    std::string row;
    for (int j = 1; j <= g.n(); ++j) {
      const FieldElement& e = g(t, j);
      if (e.is_zero()) continue;
      if (!row.empty()) row += " + ";
      if (!e.is_one()) row += to_string(e) + "*";
      row += "x" + std::to_string(j);
    }
    if (row == "x" + std::to_string(t)) continue;
    if (!out.empty()) out += ", ";
    out += "x" + std::to_string(t) + " -> " + row;
  }
  return out.empty() ? "identity" : out;
}

}  // namespace borelq
