#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "borelq/errors.hpp"
#include "borelq/quadratic_form.hpp"
#include "borelq/tower_field.hpp"

namespace borelq {

// eps x_i^2 + delta x_i x_j; a pure square has j == i and delta == false.
struct NormalComponent {
  int i = 0;
  int j = 0;
  bool eps = false;
  bool delta = false;

  bool is_square() const { return !delta; }
  friend bool operator==(const NormalComponent&, const NormalComponent&) = default;
};

class NormalForm {
 public:
  NormalForm() = default;
  NormalForm(int n, std::vector<NormalComponent> components)
      : n_(n), components_(std::move(components)) {
    std::sort(components_.begin(), components_.end(),
              [](const NormalComponent& a, const NormalComponent& b) { return a.i < b.i; });
    for (const auto& c : components_) {
      if (!c.eps && !c.delta) throw InvalidInput("component with eps = delta = 0");
      if ((c.j == c.i) == c.delta) throw InvalidInput("component index pair does not match delta");
      if (c.i < 1 || c.j > n_ || c.i > c.j) throw InvalidInput("component index out of range");
    }
  }

  int n() const { return n_; }
  const std::vector<NormalComponent>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  bool is_zero() const { return components_.empty(); }

  QuadraticForm as_form() const {
    QuadraticForm q(n_);
    for (const auto& c : components_) {
      if (c.eps) q.add(c.i, c.i, FieldElement::one());
      if (c.delta) q.add(c.i, c.j, FieldElement::one());
    }
    return q;
  }

  std::set<int> ind() const {
    std::set<int> out;
    for (const auto& c : components_) {
      out.insert(c.i);
      out.insert(c.j);
    }
    return out;
  }

  friend bool operator==(const NormalForm& a, const NormalForm& b) {
    return a.n_ == b.n_ && a.components_ == b.components_;
  }
  friend bool operator!=(const NormalForm& a, const NormalForm& b) { return !(a == b); }

 private:
  int n_ = 0;
  std::vector<NormalComponent> components_;
};

inline std::string to_string(const NormalForm& nf) { return to_string(nf.as_form()); }

inline int brank(const NormalForm& nf) {
  int r = 0;
  for (const auto& c : nf.components()) r += (c.delta ? 1 : 0) + (c.eps ? 1 : 0);
  return r;
}

inline bool is_nondegenerate(const NormalForm& nf) {
  return static_cast<int>(nf.ind().size()) == nf.n();
}

// Q_n membership: nondegenerate and of maximal B-rank.
inline bool in_q(const NormalForm& nf) { return is_nondegenerate(nf) && brank(nf) == nf.n(); }

// brank descending, then canonical text.
inline bool canonical_less(const NormalForm& a, const NormalForm& b) {
  const int ra = brank(a), rb = brank(b);
  if (ra != rb) return ra > rb;
  return to_string(a) < to_string(b);
}

inline void sort_canonical(std::vector<NormalForm>& forms) {
  std::sort(forms.begin(), forms.end(), canonical_less);
}

enum class Condition { coefficients, disjointness, component_shape, c1, c2 };

inline const char* condition_name(Condition c) {
  switch (c) {
    case Condition::coefficients: return "coefficients";
    case Condition::disjointness: return "disjointness";
    case Condition::component_shape: return "component-shape";
    case Condition::c1: return "C1";
    case Condition::c2: return "C2";
  }
  return "?";
}

struct Violation {
  Condition condition;
  std::vector<int> indices;
  std::string message;
};

struct NormalityReport {
  bool normal = false;
  std::vector<Violation> violations;
  std::optional<NormalForm> form;  // present iff normal
};

namespace detail {

inline bool nested(const NormalComponent& outer, const NormalComponent& inner) {
  return outer.delta && inner.delta && outer.i < inner.i && inner.j < outer.j;
}

inline std::vector<Violation> flag_violations(const std::vector<NormalComponent>& comps) {
  std::vector<Violation> out;
  for (std::size_t t = 0; t < comps.size(); ++t) {
    if (!(comps[t].eps && comps[t].is_square())) continue;
    for (std::size_t s = t + 1; s < comps.size(); ++s) {
      if (comps[s].eps) {
        out.push_back({Condition::c1,
                       {comps[t].i, comps[s].i},
                       "square at x" + std::to_string(comps[s].i) + " after pure square x" +
                           std::to_string(comps[t].i)});
      }
    }
  }
  for (const auto& s : comps) {
    for (const auto& t : comps) {
      if (nested(s, t) && s.eps && t.eps) {
        out.push_back({Condition::c2,
                       {s.i, s.j, t.i, t.j},
                       "nested pairs (" + std::to_string(s.i) + "," + std::to_string(s.j) +
                           ") and (" + std::to_string(t.i) + "," + std::to_string(t.j) +
                           ") both carry squares"});
      }
    }
  }
  return out;
}

}  // namespace detail

inline NormalityReport is_normal(const QuadraticForm& q) {
  NormalityReport report;
  const int n = q.n();
  std::vector<int> mixed_partner(n + 1, 0);
  std::vector<int> mixed_count(n + 1, 0);
  for (const auto& [m, c] : q.terms()) {
    if (!c.is_one()) {
      report.violations.push_back({Condition::coefficients,
                                   {m.first, m.second},
                                   "coefficient " + to_string(c) + " is not 1"});
    }
    if (m.first != m.second) {
      ++mixed_count[m.first];
      ++mixed_count[m.second];
      mixed_partner[m.first] = m.second;
      mixed_partner[m.second] = m.first;
    }
  }
  for (int k = 1; k <= n; ++k) {
    if (mixed_count[k] > 1) {
      report.violations.push_back({Condition::disjointness,
                                   {k},
                                   "x" + std::to_string(k) + " occurs in " +
                                       std::to_string(mixed_count[k]) + " mixed monomials"});
    }
  }
  for (const auto& [m, c] : q.terms()) {
    if (m.first != m.second) continue;
    const int k = m.first;
    if (mixed_count[k] == 1 && mixed_partner[k] < k) {
      report.violations.push_back({Condition::component_shape,
                                   {mixed_partner[k], k},
                                   "square on the larger index x" + std::to_string(k) +
                                       " of a mixed pair"});
    }
  }
  if (!report.violations.empty()) return report;

  std::vector<NormalComponent> comps;
  for (const auto& [m, c] : q.terms()) {
    if (m.first != m.second) {
      comps.push_back({m.first, m.second, !q.coef(m.first, m.first).is_zero(), true});
    } else if (mixed_count[m.first] == 0) {
      comps.push_back({m.first, m.first, true, false});
    }
  }
  std::sort(comps.begin(), comps.end(),
            [](const NormalComponent& a, const NormalComponent& b) { return a.i < b.i; });
  report.violations = detail::flag_violations(comps);
  report.normal = report.violations.empty();
  if (report.normal) report.form = NormalForm(n, comps);
  return report;
}

inline NormalForm to_normal_form(const QuadraticForm& q) {
  auto report = is_normal(q);
  if (!report.normal) {
    throw InvalidInput("not a normal form: " + report.violations.front().message);
  }
  return *report.form;
}

inline NormalForm parse_normal_form(std::string_view text, int n = -1) {
  return to_normal_form(parse_form(text, n));
}

struct NormalizeResult {
  NormalForm nf;
  GroupElement witness;
  std::vector<std::string> log;
  int level() const { return witness.max_level(); }
};

namespace detail {

class Normalizer {
 public:
  explicit Normalizer(const QuadraticForm& q)
      : input_(q), q_(q), n_(q.n()), witness_(GroupElement::identity(q.n())) {}

  NormalizeResult run() {
    peel();
    step_squares();
    step_nested();
    NormalForm nf(n_, comps_);
    if (q_ != nf.as_form() || act(witness_, input_) != nf.as_form()) {
      throw std::logic_error("normalize: witness does not reproduce the normal form of " +
                             to_string(input_));
    }
    return {nf, witness_, log_};
  }

 private:
  struct Entry {
    int row, col;
    FieldElement value;
  };

  void apply(const std::vector<Entry>& changes, const std::string& note) {
    std::vector<FieldElement> e = GroupElement::identity(n_).entries();
    bool trivial = true;
    for (const auto& c : changes) {
      FieldElement& slot = e[(c.row - 1) * n_ + (c.col - 1)];
      if (slot != c.value) trivial = false;
      slot = c.value;
    }
    if (trivial) return;
    const GroupElement b = GroupElement::from_entries(n_, std::move(e), GroupKind::borel);
    q_ = act(b, q_);
    witness_ = matmul(witness_, b);
    log_.push_back(note + ": " + substitution_text(b));
  }

  // Smallest index of a monomial not yet absorbed into a component.
  std::optional<int> next_index() const {
    for (const auto& [m, c] : q_.terms()) {
      if (!done_.count(m.first) && !done_.count(m.second)) return m.first;
    }
    return std::nullopt;
  }

  void peel() {
    while (auto start = next_index()) {
      const int i = *start;
      int j = 0;
      for (int t = i + 1; t <= n_; ++t) {
        if (!q_.coef(i, t).is_zero()) {
          j = t;
          break;
        }
      }
      if (j == 0) {
        const FieldElement cii = q_.coef(i, i);
        apply({{i, i, inv(sqrt(cii))}}, "scale x" + std::to_string(i));
        comps_.push_back({i, i, true, false});
        done_.insert(i);
        continue;
      }
      const FieldElement cii = q_.coef(i, i);
      const FieldElement cij_inv = inv(q_.coef(i, j));
      std::vector<Entry> changes;
      FieldElement a = FieldElement::one();
      if (!cii.is_zero()) {
        a = sqrt(cii);
        changes.push_back({i, i, inv(a)});
      }
      changes.push_back({j, j, cij_inv * a});
      for (int s = 1; s <= n_; ++s) {
        if (s == i || s == j || done_.count(s)) continue;
        const FieldElement v = q_.coef(std::min(s, j), std::max(s, j));
        if (!v.is_zero()) changes.push_back({i, s, cij_inv * v});
      }
      for (int t = j + 1; t <= n_; ++t) {
        const FieldElement u = q_.coef(i, t);
        if (!u.is_zero() && !done_.count(t)) changes.push_back({j, t, cij_inv * u});
      }
      apply(changes, "split pair (" + std::to_string(i) + "," + std::to_string(j) + ")");

      const FieldElement gamma = q_.coef(j, j);
      if (!gamma.is_zero()) {
        if (q_.coef(i, i).is_zero()) {
          apply({{i, j, gamma}}, "clear x" + std::to_string(j) + "^2");
        } else {
          const FieldElement t = artin_schreier_solve(gamma);
          log_.push_back("Artin-Schreier root " + to_string(t) + " for " + to_string(gamma));
          apply({{i, j, t}}, "clear x" + std::to_string(j) + "^2");
        }
      }
      for (const auto& [m, c] : q_.terms()) {
        const bool touches = m.first == i || m.second == i || m.first == j || m.second == j;
        if (touches && m != Monomial{i, i} && m != Monomial{i, j}) {
          throw std::logic_error("normalize: pair (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") not isolated");
        }
      }
      comps_.push_back({i, j, !q_.coef(i, i).is_zero(), true});
      done_.insert(i);
      done_.insert(j);
    }
    std::sort(comps_.begin(), comps_.end(),
              [](const NormalComponent& a, const NormalComponent& b) { return a.i < b.i; });
  }

  // A pure square absorbs every later square.
  void step_squares() {
    std::size_t t = 0;
    while (t < comps_.size() && !(comps_[t].eps && comps_[t].is_square())) ++t;
    if (t == comps_.size()) return;
    const int it = comps_[t].i;
    std::vector<Entry> changes;
    std::vector<NormalComponent> kept(comps_.begin(), comps_.begin() + t + 1);
    for (std::size_t l = t + 1; l < comps_.size(); ++l) {
      NormalComponent c = comps_[l];
      if (c.eps) {
        changes.push_back({it, c.i, FieldElement::one()});
        c.eps = false;
      }
      if (c.delta) kept.push_back(c);
    }
    apply(changes, "absorb squares into x" + std::to_string(it));
    comps_ = kept;
  }

  void step_nested() {
    while (true) {
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t s = 0; s < comps_.size(); ++s) {
        for (std::size_t t = 0; t < comps_.size(); ++t) {
          if (!nested(comps_[s], comps_[t]) || !comps_[s].eps || !comps_[t].eps) continue;
          const auto key = std::make_pair(comps_[s].i, comps_[t].i);
          if (!best || key < std::make_pair(comps_[best->first].i, comps_[best->second].i)) {
            best = std::make_pair(s, t);
          }
        }
      }
      if (!best) return;
      const NormalComponent outer = comps_[best->first];
      const NormalComponent inner = comps_[best->second];
      apply({{outer.i, inner.i, FieldElement::one()}, {inner.j, outer.j, FieldElement::one()}},
            "unnest (" + std::to_string(outer.i) + "," + std::to_string(outer.j) + ") over (" +
                std::to_string(inner.i) + "," + std::to_string(inner.j) + ")");
      comps_[best->second].eps = false;
    }
  }

  QuadraticForm input_;
  QuadraticForm q_;
  int n_;
  GroupElement witness_;
  std::vector<NormalComponent> comps_;
  std::set<int> done_;
  std::vector<std::string> log_;
};

}  // namespace detail

inline NormalizeResult normalize(const QuadraticForm& q) { return detail::Normalizer(q).run(); }

inline NormalForm extend(const NormalForm& nf) {
  std::vector<NormalComponent> comps;
  int squares = 0;
  for (auto c : nf.components()) {
    if (c.is_square()) {
      ++squares;
      c.j = nf.n() + 1;
      c.delta = true;
    }
    comps.push_back(c);
  }
  if (squares > 1) throw InvalidInput("extend: more than one pure square");
  return NormalForm(nf.n() + 1, comps);
}

// Maximal connected subdiagrams of the extended diagram; unused dots belong to none.
inline std::vector<NormalForm> diagram_components(const NormalForm& nf) {
  const NormalForm ext = extend(nf);
  const int big_n = ext.n();
  std::vector<int> height_change(big_n + 2, 0);
  for (const auto& c : ext.components()) {
    ++height_change[c.i];
    --height_change[c.j];
  }
  std::vector<int> block_of(big_n + 1, 0);
  int height = 0, block = 0;
  for (int p = 1; p <= big_n; ++p) {
    block_of[p] = block;
    height += height_change[p];
    if (height == 0) ++block;
  }
  std::vector<std::vector<NormalComponent>> parts(block + 1);
  for (const auto& c : nf.components()) parts[block_of[c.i]].push_back(c);
  std::vector<NormalForm> out;
  for (auto& p : parts)
    if (!p.empty()) out.emplace_back(nf.n(), std::move(p));
  return out;
}

inline std::vector<NormalForm> connected_components(const NormalForm& nf) {
  if (!in_q(nf)) throw PreconditionViolation("connected components are defined on Q_n only");
  return diagram_components(nf);
}

inline int cc(const NormalForm& nf) { return static_cast<int>(connected_components(nf).size()); }

struct ArcDiagram {
  int n = 0;
  std::vector<std::pair<int, int>> arcs;
  std::set<int> filled;
  std::set<int> used;
};

inline ArcDiagram arc_diagram(const NormalForm& nf) {
  ArcDiagram d;
  d.n = nf.n();
  d.used = nf.ind();
  for (const auto& c : nf.components()) {
    if (c.delta) d.arcs.emplace_back(c.i, c.j);
    if (c.eps) d.filled.insert(c.i);
  }
  return d;
}

enum class Step { up, down };

inline std::vector<Step> dyck_path(const NormalForm& nf) {
  if (!in_q(nf)) throw PreconditionViolation("Dyck paths are defined on Q_n only");
  const NormalForm ext = nf.n() % 2 ? extend(nf) : nf;
  std::vector<Step> steps(ext.n());
  for (const auto& c : ext.components()) {
    steps[c.i - 1] = Step::up;
    steps[c.j - 1] = Step::down;
  }
  return steps;
}

inline std::string to_string(const std::vector<Step>& path) {
  std::string s;
  for (Step st : path) s += st == Step::up ? 'U' : 'D';
  return s;
}

inline std::string arc_ascii(const ArcDiagram& d) {
  auto col = [](int k) { return 3 * (k - 1) + 1; };
  const int width = d.n > 0 ? col(d.n) + 2 : 1;
  std::vector<std::pair<int, int>> arcs = d.arcs;
  std::sort(arcs.begin(), arcs.end(), [](auto a, auto b) {
    return std::make_pair(b.second - b.first, a.first) < std::make_pair(a.second - a.first, b.first);
  });
  std::string out;
  for (const auto& [s, t] : arcs) {
    std::string row(width, ' ');
    row[col(s)] = '+';
    row[col(t)] = '+';
    for (int k = col(s) + 1; k < col(t); ++k) row[k] = '-';
    while (!row.empty() && row.back() == ' ') row.pop_back();
    out += row + "\n";
  }
  std::string dots(width, ' '), labels;
  for (int k = 1; k <= d.n; ++k) {
    dots[col(k)] = d.filled.count(k) ? '*' : (d.used.count(k) ? 'o' : '.');
    std::string label = std::to_string(k);
    labels += std::string(std::max<int>(0, col(k) - static_cast<int>(labels.size())), ' ') + label;
  }
  while (!dots.empty() && dots.back() == ' ') dots.pop_back();
  return out + dots + "\n" + labels + "\n";
}

inline std::string arc_dot(const ArcDiagram& d) {
  std::string out = "graph arcs {\n  layout=neato;\n  node [shape=circle, label=\"\", width=0.15];\n";
  for (int k = 1; k <= d.n; ++k) {
    out += "  v" + std::to_string(k) + " [pos=\"" + std::to_string(k - 1) + ",0!\", xlabel=\"" +
           std::to_string(k) + "\"";
    if (d.filled.count(k)) out += ", style=filled, fillcolor=black";
    if (!d.used.count(k)) out += ", style=dotted";
    out += "];\n";
  }
  for (const auto& [s, t] : d.arcs) {
    out += "  v" + std::to_string(s) + " -- v" + std::to_string(t) + ";\n";
  }
  return out + "}\n";
}

inline std::string arc_tikz(const ArcDiagram& d, bool standalone = true) {
  std::string body = "\\begin{tikzpicture}\n"
                     "  \\tikzset{filled/.style={draw,circle,inner sep=1pt,fill=black}}\n"
                     "  \\tikzset{hollow/.style={draw,circle,inner sep=1pt}}\n"
                     "  \\tikzset{unused/.style={draw=gray,circle,dotted,inner sep=1pt}}\n";
  for (int k = 1; k <= d.n; ++k) {
    const char* style = d.filled.count(k) ? "filled" : (d.used.count(k) ? "hollow" : "unused");
    body += "  \\node[" + std::string(style) + ",label=below:{\\tiny $" + std::to_string(k) +
            "$}] (" + std::to_string(k) + ") at (" + std::to_string(k - 1) + ",0) { };\n";
  }
  for (const auto& [s, t] : d.arcs) {
    body += "  \\draw (" + std::to_string(s) + ") to [out=30,in=150] (" + std::to_string(t) + ");\n";
  }
  body += "\\end{tikzpicture}\n";
  if (!standalone) return body;
  return "\\documentclass[tikz]{standalone}\n\\begin{document}\n" + body + "\\end{document}\n";
}

}  // namespace borelq
