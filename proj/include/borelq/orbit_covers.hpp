#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "borelq/errors.hpp"
#include "borelq/normal_form.hpp"
#include "borelq/oracle.hpp"
#include "borelq/parabolic_orbits.hpp"

namespace borelq {

using Entry = std::pair<int, int>;  // (row, column) of an upper-triangular matrix

// Necessary conditions on stabilizer elements of a normal form: (row, col) must vanish.
struct ZeroConstraint {
  int row = 0;
  int col = 0;
  int item = 0;  // 1: row of a j-index, 2: between two squared i-indices
};

inline std::vector<ZeroConstraint> theorem2_constraints(const NormalForm& nf) {
  if (!is_normal(nf.as_form()).normal) throw PreconditionViolation("constraints need a normal form");
  std::vector<ZeroConstraint> out;
  const auto& comps = nf.components();
  std::set<int> js;
  for (std::size_t t = 0; t < comps.size(); ++t) {
    js.insert(comps[t].j);
    // Only mixed components: x1^2 + x2*x3 is fixed by x1 -> x1 + x3, x2 -> x2 + x3.
    if (comps[t].delta) {
      for (int z = 1; z <= nf.n(); ++z)
        if (!js.count(z)) out.push_back({comps[t].j, z, 1});
    }
    if (!comps[t].eps) continue;
    for (std::size_t s = 0; s < t; ++s)
      if (comps[s].eps) out.push_back({comps[s].i, comps[t].i, 2});
  }
  return out;
}

// Upper off-diagonal part, ready for the oracle's pruned search.
inline oracle::ZeroSet to_zero_set(const std::vector<ZeroConstraint>& constraints) {
  oracle::ZeroSet out;
  for (const auto& c : constraints)
    if (c.row < c.col) out.insert({c.row, c.col});
  return out;
}

enum class RelationKind { binary_tag, as_coupled };

// binary_tag: sum of indices in {0,1}. as_coupled: s^2 + s = (sum of coupled)^2, s the index sum.
struct ComponentRelation {
  std::vector<Entry> indices;
  RelationKind kind = RelationKind::binary_tag;
  std::vector<Entry> coupled;
};

// Exact coefficient of x_j^2: u_a^2 + u_a + sum of u_e^2 over squares = 0.
struct ColumnRelation {
  int column = 0;
  Entry as_entry;
  std::vector<Entry> squares;
};

struct StabilizerPresentation {
  int n = 0;
  std::set<Entry> zero_entries;
  std::vector<std::pair<Entry, Entry>> symmetry_pairs;
  std::set<Entry> free_entries;  // off-diagonal entries not forced to zero
  std::vector<ComponentRelation> component_relations;
  std::vector<ColumnRelation> column_relations;
};

namespace detail {

struct Block {
  std::vector<NormalComponent> arcs;
  int square = 0;  // the pure square position, 0 if none
};

inline std::vector<Block> blocks_of(const NormalForm& q) {
  std::vector<Block> out;
  for (const auto& part : diagram_components(q)) {
    Block b;
    for (const auto& c : part.components()) {
      if (c.delta) b.arcs.push_back(c);
      else b.square = c.i;
    }
    out.push_back(std::move(b));
  }
  return out;
}

inline void require_q(const NormalForm& q) {
  if (!in_q(q)) throw PreconditionViolation("form is not nondegenerate of maximal B-rank");
}

}  // namespace detail

inline StabilizerPresentation stabilizer_presentation(const NormalForm& q) {
  detail::require_q(q);
  StabilizerPresentation p;
  p.n = q.n();
  for (const auto& b : detail::blocks_of(q)) {
    const auto& arcs = b.arcs;
    for (std::size_t t = 0; t < arcs.size(); ++t) {
      ColumnRelation col{arcs[t].j, {arcs[t].i, arcs[t].j}, {}};
      p.free_entries.insert(col.as_entry);
      for (std::size_t s = 0; s < arcs.size(); ++s) {
        if (s == t) continue;
        // u_{i_s j_t} = u_{i_t j_s}; an entry whose partner lies below the diagonal vanishes.
        if (arcs[s].i < arcs[t].j && arcs[t].i < arcs[s].j) {
          col.squares.push_back({arcs[s].i, arcs[t].j});
          p.free_entries.insert({arcs[s].i, arcs[t].j});
          if (s < t) p.symmetry_pairs.push_back({{arcs[s].i, arcs[t].j}, {arcs[t].i, arcs[s].j}});
        }
      }
      if (b.square && b.square < arcs[t].j) {
        col.squares.push_back({b.square, arcs[t].j});
        p.free_entries.insert({b.square, arcs[t].j});
      }
      p.column_relations.push_back(std::move(col));
    }
    if (arcs.empty()) continue;
    ComponentRelation rel;
    for (const auto& a : arcs) rel.indices.push_back({a.i, a.j});
    if (b.square) {
      rel.kind = RelationKind::as_coupled;
      for (const auto& a : arcs)
        if (b.square < a.j) rel.coupled.push_back({b.square, a.j});
    }
    p.component_relations.push_back(std::move(rel));
  }
  for (int k = 1; k <= p.n; ++k)
    for (int l = k + 1; l <= p.n; ++l)
      if (!p.free_entries.count({k, l})) p.zero_entries.insert({k, l});
  return p;
}

// All unipotent matrices over F_{2^(level+1)} (level 0 or 1) satisfying the presentation.
inline std::vector<oracle::Matrix> instantiate(const StabilizerPresentation& p, int level) {
  const int fsize = oracle::field_size(level);
  std::map<Entry, int> var;
  int count = 0;
  for (const auto& e : p.free_entries) var[e] = -1;
  for (const auto& [a, b] : p.symmetry_pairs) var[a] = var[b] = count++;
  for (auto& [e, v] : var)
    if (v < 0) v = count++;
  double log_size = count * std::log2(static_cast<double>(fsize));
  if (log_size > 24) throw SizeGuardExceeded("presentation has too many free entries to enumerate");

  std::vector<oracle::Matrix> out;
  std::vector<std::uint8_t> values(count, 0);
  oracle::Matrix m{p.n, std::vector<std::uint8_t>(static_cast<std::size_t>(p.n) * p.n, 0)};
  for (int k = 1; k <= p.n; ++k) m(k, k) = 1;
  auto sq = [](std::uint8_t x) { return oracle::f4::mul(x, x); };
  std::function<void(int)> rec = [&](int k) {
    if (k < count) {
      for (int v = 0; v < fsize; ++v) {
        values[k] = static_cast<std::uint8_t>(v);
        rec(k + 1);
      }
      return;
    }
    for (const auto& [e, v] : var) m(e.first, e.second) = values[v];
    for (const auto& c : p.column_relations) {
      const std::uint8_t a = m(c.as_entry.first, c.as_entry.second);
      std::uint8_t sum = sq(a) ^ a;
      for (const auto& e : c.squares) sum ^= sq(m(e.first, e.second));
      if (sum) return;
    }
    out.push_back(m);
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

// The tag vector of a stabilizer element: one value per binary_tag relation.
inline std::vector<std::uint8_t> stabilizer_phi(const StabilizerPresentation& p, const oracle::Matrix& u) {
  std::vector<std::uint8_t> out;
  for (const auto& r : p.component_relations) {
    if (r.kind != RelationKind::binary_tag) continue;
    std::uint8_t s = 0;
    for (const auto& e : r.indices) s ^= u(e.first, e.second);
    out.push_back(s);
  }
  return out;
}

inline long long component_count(const NormalForm& q) {
  detail::require_q(q);
  const int f = cc(q);
  return 1LL << (q.n() % 2 ? f - 1 : f);
}

// A subset of {1..n} with ceil(n/2) elements, kept sorted.
struct CoverLabel {
  int n = 0;
  std::vector<int> m;

  friend bool operator==(const CoverLabel&, const CoverLabel&) = default;
  friend auto operator<=>(const CoverLabel&, const CoverLabel&) = default;
};

inline int cover_size(int n) { return (n + 1) / 2; }

inline CoverLabel make_cover_label(int n, std::vector<int> m) {
  std::sort(m.begin(), m.end());
  if (static_cast<int>(m.size()) != cover_size(n)) throw InvalidInput("cover label has the wrong size");
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k] < 1 || m[k] > n) throw InvalidInput("cover label element out of range");
    if (k && m[k] == m[k - 1]) throw InvalidInput("cover label has repeated elements");
  }
  return {n, std::move(m)};
}

inline std::string to_string(const CoverLabel& c) {
  std::string out = "{";
  for (std::size_t k = 0; k < c.m.size(); ++k) out += (k ? "," : "") + std::to_string(c.m[k]);
  return out + "}";
}

// A form in Q_n with one tag bit per component that carries no pure square.
struct ZElement {
  NormalForm q;
  std::vector<int> eps;

  friend bool operator==(const ZElement&, const ZElement&) = default;
};

inline int tag_count(const NormalForm& q) {
  detail::require_q(q);
  int tags = 0;
  for (const auto& b : detail::blocks_of(q)) tags += b.square ? 0 : 1;
  return tags;
}

inline CoverLabel pi(const ZElement& z) {
  detail::require_q(z.q);
  if (static_cast<int>(z.eps.size()) != tag_count(z.q)) throw InvalidInput("tag vector has the wrong length");
  std::vector<int> m;
  std::size_t tag = 0;
  for (const auto& b : detail::blocks_of(z.q)) {
    const bool right = !b.square && z.eps[tag++];
    for (const auto& a : b.arcs) m.push_back(right ? a.j : a.i);
    if (b.square) m.push_back(b.square);
  }
  return make_cover_label(z.q.n(), std::move(m));
}

inline ZElement pi_inv(const CoverLabel& label) {
  const CoverLabel c = make_cover_label(label.n, label.m);
  const int n = c.n, big_n = n + n % 2;
  std::vector<int> rest;
  for (int k = 1; k <= big_n; ++k)
    if (!std::binary_search(c.m.begin(), c.m.end(), k)) rest.push_back(k);
  std::vector<NormalComponent> comps;
  for (std::size_t a = 0; a < c.m.size(); ++a) {
    const int lo = std::min(c.m[a], rest[a]), hi = std::max(c.m[a], rest[a]);
    if (hi == n + 1) comps.push_back({lo, lo, true, false});
    else comps.push_back({lo, hi, true, true});
  }
  ZElement z{NormalForm(n, std::move(comps)), {}};
  if (!in_q(z.q) || !is_normal(z.q.as_form()).normal) throw std::logic_error("pairing left Q_n");
  const std::set<int> in_m(c.m.begin(), c.m.end());
  for (const auto& b : detail::blocks_of(z.q)) {
    int left = 0, right = 0;
    for (const auto& a : b.arcs) {
      left += in_m.count(a.i);
      right += in_m.count(a.j);
    }
    const int arcs = static_cast<int>(b.arcs.size());
    if (b.square) {
      if (left != arcs || !in_m.count(b.square)) throw std::logic_error("odd block not on its left side");
    } else if (left == arcs && right == 0) {
      z.eps.push_back(0);
    } else if (right == arcs && left == 0) {
      z.eps.push_back(1);
    } else {
      throw std::logic_error("block orientation is not uniform");
    }
  }
  return z;
}

inline ZElement rho(const CoverLabel& c) { return pi_inv(c); }

inline std::vector<CoverLabel> covers(const NormalForm& q) {
  const int tags = tag_count(q);
  std::vector<CoverLabel> out;
  for (int bits = 0; bits < (1 << tags); ++bits) {
    ZElement z{q, std::vector<int>(tags)};
    for (int t = 0; t < tags; ++t) z.eps[t] = (bits >> t) & 1;
    out.push_back(pi(z));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// All ceil(n/2)-subsets of {1..n} in lexicographic order.
inline std::vector<CoverLabel> all_cover_labels(int n) {
  if (n < 0) throw InvalidInput("negative number of variables");
  if (n > 16) throw SizeGuardExceeded("cover labels are limited to n <= 16");
  std::vector<CoverLabel> out;
  const int k = cover_size(n);
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int next) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back({n, cur});
      return;
    }
    for (int v = next; v <= n - (k - static_cast<int>(cur.size())) + 1; ++v) {
      cur.push_back(v);
      rec(v + 1);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

inline std::vector<int> simple_transposition(int n, int i) {
  if (i < 1 || i >= n) throw InvalidInput("reflection index out of range");
  std::vector<int> w(n);
  for (int t = 1; t <= n; ++t) w[t - 1] = t;
  std::swap(w[i - 1], w[i]);
  return w;
}

// w[t-1] is the image of t.
inline CoverLabel weyl_apply(const std::vector<int>& w, const CoverLabel& c) {
  if (static_cast<int>(w.size()) != c.n) throw InvalidInput("permutation size mismatch");
  std::vector<bool> seen(c.n + 1, false);
  for (int v : w) {
    if (v < 1 || v > c.n || seen[v]) throw InvalidInput("not a permutation");
    seen[v] = true;
  }
  std::vector<int> image;
  for (int v : c.m) image.push_back(w[v - 1]);
  return make_cover_label(c.n, std::move(image));
}

struct WeylEdge {
  int a = 0;
  int b = 0;
  int label = 0;
};

struct WeylGraph {
  int n = 0;
  std::vector<CoverLabel> vertices;
  std::vector<WeylEdge> edges;
};

inline WeylGraph weyl_orbit_graph(int n) {
  if (n > 12) throw SizeGuardExceeded("Weyl graphs are limited to n <= 12");
  WeylGraph g;
  g.n = n;
  g.vertices = all_cover_labels(n);
  std::map<CoverLabel, int> index;
  for (std::size_t k = 0; k < g.vertices.size(); ++k) index[g.vertices[k]] = static_cast<int>(k);
  for (std::size_t k = 0; k < g.vertices.size(); ++k)
    for (int i = 1; i < n; ++i) {
      const int other = index.at(weyl_apply(simple_transposition(n, i), g.vertices[k]));
      if (other > static_cast<int>(k)) g.edges.push_back({static_cast<int>(k), other, i});
    }
  return g;
}

inline std::string weyl_text(const WeylGraph& g) {
  std::string out = "weyl graph n=" + std::to_string(g.n) + "\nvertices:\n";
  for (std::size_t k = 0; k < g.vertices.size(); ++k) {
    out += "  m" + std::to_string(k) + "  " + to_string(g.vertices[k]) + "  " +
           to_string(pi_inv(g.vertices[k]).q) + "\n";
  }
  out += "edges:\n";
  for (const auto& e : g.edges) {
    out += "  m" + std::to_string(e.a) + " -- m" + std::to_string(e.b) + "  s" + std::to_string(e.label) + "\n";
  }
  return out;
}

inline std::string weyl_dot(const WeylGraph& g) {
  std::string out = "graph weyl" + std::to_string(g.n) + " {\n  node [shape=box];\n";
  for (std::size_t k = 0; k < g.vertices.size(); ++k) {
    out += "  m" + std::to_string(k) + " [label=\"" + to_string(g.vertices[k]) + "\"];\n";
  }
  for (const auto& e : g.edges) {
    out += "  m" + std::to_string(e.a) + " -- m" + std::to_string(e.b) + " [label=\"s" +
           std::to_string(e.label) + "\"];\n";
  }
  return out + "}\n";
}

inline std::string weyl_tikz(const WeylGraph& g) {
  std::string out = "\\documentclass[tikz]{standalone}\n\\begin{document}\n"
                    "\\begin{tikzpicture}[scale=0.8]\n";
  // Covers of the same form share a row.
  std::map<std::string, int> row_of;
  std::map<int, int> used;
  for (std::size_t k = 0; k < g.vertices.size(); ++k) {
    const std::string form = to_string(pi_inv(g.vertices[k]).q);
    const int row = row_of.emplace(form, static_cast<int>(row_of.size())).first->second;
    std::string text;
    for (std::size_t a = 0; a < g.vertices[k].m.size(); ++a)
      text += (a ? "," : "") + std::to_string(g.vertices[k].m[a]);
    out += "  \\node (m" + std::to_string(k) + ") at (" + std::to_string(3 * used[row]++) + "," +
           std::to_string(-2 * row) + ") {$\\{" + text + "\\}$};\n";
  }
  for (const auto& e : g.edges) {
    out += "  \\draw (m" + std::to_string(e.a) + ") -- node[midway,fill=white] {\\footnotesize $s_{" +
           std::to_string(e.label) + "}$} (m" + std::to_string(e.b) + ");\n";
  }
  return out + "\\end{tikzpicture}\n\\end{document}\n";
}

enum class KnopCase { toggle, fixed, move };

inline const char* knop_case_name(KnopCase k) {
  switch (k) {
    case KnopCase::toggle: return "toggle";
    case KnopCase::fixed: return "fixed";
    case KnopCase::move: return "move";
  }
  return "?";
}

struct KnopRecord {
  CoverLabel m;
  int i = 0;
  KnopCase kind = KnopCase::fixed;
  PhiClass required = PhiClass::G0;
  PhiClass computed = PhiClass::G0;
  ZElement source;
  ZElement target;
  bool target_ok = true;

  bool ok() const { return required == computed && target_ok; }
};

inline KnopRecord knop_case(const CoverLabel& m, int i) {
  const int n = m.n;
  KnopRecord r;
  r.m = m;
  r.i = i;
  const CoverLabel image = weyl_apply(simple_transposition(n, i), m);
  r.source = pi_inv(m);
  r.target = pi_inv(image);
  const NormalForm& q = r.source.q;
  r.computed = p_orbit_decompose(q, i).computed_phi;

  // Left endpoints of the extended diagram: i-indices and the pure square.
  std::set<int> left;
  bool pair = false;
  for (const auto& c : q.components()) {
    left.insert(c.i);
    if (c.delta && c.i == i && c.j == i + 1) pair = true;
  }
  if (image == m) {
    r.kind = KnopCase::fixed;
    const bool contact = !left.count(i) && left.count(i + 1);
    r.required = contact ? PhiClass::U0 : PhiClass::T0;
    r.target_ok = r.target == r.source;
  } else if (pair) {
    r.kind = KnopCase::toggle;
    r.required = PhiClass::N0;
    int flips = 0;
    for (std::size_t t = 0; t < r.source.eps.size(); ++t) flips += r.source.eps[t] != r.target.eps[t];
    r.target_ok = r.target.q == q && flips == 1;
  } else {
    r.kind = KnopCase::move;
    r.required = PhiClass::U0;
    const NormalForm reflected =
        normalize(act(GroupElement::simple_reflection(n, i), q.as_form())).nf;
    r.target_ok = r.target.q == reflected && r.target.q != q;
  }
  return r;
}

// Per-form rows: the presentation relations, then each tag vector with its label.
inline std::string cover_table(int n) {
  std::string out;
  for (const auto& q : enumerate_max_rank(n)) {
    out += to_string(q) + "\n";
    const auto p = stabilizer_presentation(q);
    for (const auto& rel : p.component_relations) {
      std::string lhs;
      for (const auto& [k, l] : rel.indices)
        lhs += (lhs.empty() ? "" : " + ") + ("u" + std::to_string(k) + "," + std::to_string(l));
      if (rel.kind == RelationKind::binary_tag) {
        out += "  tag: " + lhs + " in {0,1}\n";
      } else {
        std::string rhs;
        for (const auto& [k, l] : rel.coupled)
          rhs += (rhs.empty() ? "" : " + ") + ("u" + std::to_string(k) + "," + std::to_string(l));
        out += "  coupled: (" + lhs + ")^2 + (" + lhs + ") = (" + rhs + ")^2\n";
      }
    }
    for (const auto& c : covers(q)) {
      const ZElement z = pi_inv(c);
      std::string eps;
      for (int e : z.eps) eps += std::to_string(e);
      out += "  eps=(" + eps + ")  m=" + to_string(c) + "\n";
    }
  }
  return out;
}

}  // namespace borelq
