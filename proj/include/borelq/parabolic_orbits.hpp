#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "borelq/errors.hpp"
#include "borelq/normal_form.hpp"
#include "borelq/oracle.hpp"
#include "borelq/orbit_census.hpp"

namespace borelq {

enum class PhiClass { G0, T0, N0, U0 };

inline const char* phi_name(PhiClass c) {
  switch (c) {
    case PhiClass::G0: return "G0";
    case PhiClass::T0: return "T0";
    case PhiClass::N0: return "N0";
    case PhiClass::U0: return "U0";
  }
  return "?";
}

struct POrbitDecomposition {
  NormalForm q;
  int i = 0;
  std::vector<NormalForm> reps;  // canonical order, so reps.front() is the top
  PhiClass computed_phi = PhiClass::G0;
  std::optional<PhiClass> paper_phi;  // empty when no table row applies
  bool agree = false;
};

namespace detail {

inline QuadraticForm reflect(int i, const QuadraticForm& q) {
  return act(GroupElement::simple_reflection(q.n(), i), q);
}

// Parameters of the root subgroup x_i -> x_i + a x_{i+1}: the points of F_4 plus two
// elements from higher levels standing in for a generic parameter.
inline std::vector<FieldElement> bruhat_probes() {
  return {FieldElement::zero(), FieldElement::one(), FieldElement::omega(),
          FieldElement::omega() + FieldElement::one(), FieldElement::from_bits(0b0100, 2),
          FieldElement::from_bits(0b00010110, 3)};
}

inline const NormalComponent* component_at(const NormalForm& nf, int k) {
  for (const auto& c : nf.components())
    if (c.i == k || c.j == k) return &c;
  return nullptr;
}

// Literal reading of the four-row table, first matching row wins.
inline std::optional<PhiClass> table_phi(const NormalForm& q, int i) {
  const auto a = component_at(q, i);
  const auto b = component_at(q, i + 1);
  if (!a && !b) return PhiClass::G0;
  if (a && a == b && a->delta) return PhiClass::N0;
  if (a && b && a != b) {
    // A pure square x_p^2 is read as x_p^2 + x_p x_{n+1}, as in the extended diagram.
    auto partner = [&](const NormalComponent* c) { return c->delta ? c->j : q.n() + 1; };
    if (a->i == i && b->i == i + 1) {
      const NormalComponent* far = partner(a) > partner(b) ? a : b;
      if (far->eps) return PhiClass::T0;
    }
    if (a->delta && b->delta && a->j == i && b->j == i + 1) {
      const NormalComponent* near = a->i < b->i ? a : b;
      if (near->eps) return PhiClass::T0;
    }
  }
  const QuadraticForm image = reflect(i, q.as_form());
  if (image != q.as_form() && is_normal(image).normal) return PhiClass::U0;
  return std::nullopt;
}

}  // namespace detail

// P_i = B u B s_i B and B s_i B = U_i s_i B, so every B-orbit in P_i q is the orbit of q or of
// s_i applied to x_i -> x_i + a x_{i+1} of q.
inline POrbitDecomposition p_orbit_decompose(const NormalForm& q, int i) {
  const int n = q.n();
  if (i < 1 || i >= n) throw InvalidInput("reflection index out of range");
  const QuadraticForm form = q.as_form();
  if (!is_normal(form).normal) throw PreconditionViolation("p_orbit_decompose needs a normal form");

  std::map<std::string, NormalForm> found;
  found.emplace(to_string(q), q);
  const GroupElement s = GroupElement::simple_reflection(n, i);
  for (const FieldElement& a : detail::bruhat_probes()) {
    std::vector<FieldElement> e = GroupElement::identity(n).entries();
    e[(i - 1) * n + i] = a;
    const GroupElement u = GroupElement::from_entries(n, std::move(e), GroupKind::borel);
    const NormalForm rep = normalize(act(s, act(u, form))).nf;
    found.emplace(to_string(rep), rep);
  }

  POrbitDecomposition d;
  d.q = q;
  d.i = i;
  for (auto& [text, nf] : found) d.reps.push_back(nf);
  sort_canonical(d.reps);
  switch (d.reps.size()) {
    case 1: d.computed_phi = PhiClass::G0; break;
    case 3: d.computed_phi = PhiClass::T0; break;
    case 2: {
      const bool fixed = std::any_of(d.reps.begin(), d.reps.end(), [&](const NormalForm& r) {
        return detail::reflect(i, r.as_form()) == r.as_form();
      });
      d.computed_phi = fixed ? PhiClass::N0 : PhiClass::U0;
      break;
    }
    default: throw std::logic_error("parabolic orbit met more than three B-orbits");
  }
  d.paper_phi = detail::table_phi(q, i);
  d.agree = d.paper_phi == d.computed_phi;
  return d;
}

struct PhiPair {
  PhiClass computed;
  std::optional<PhiClass> paper_table;
};

inline PhiPair phi_class(const NormalForm& q, int i) {
  const auto d = p_orbit_decompose(q, i);
  return {d.computed_phi, d.paper_phi};
}

struct BrionVertex {
  NormalForm nf;
  std::string text;
  int brank = 0;
  std::optional<double> dimension;
  int level = 0;  // 0 is the bottom row
};

struct BrionEdge {
  int top = 0;     // vertex index, placed higher
  int bottom = 0;
  int label = 0;
  int multiplicity = 1;
};

struct BrionGraph {
  int n = 0;
  std::vector<BrionVertex> vertices;  // placement order, highest first
  std::vector<BrionEdge> edges;

  int index_of(const std::string& text) const {
    for (std::size_t k = 0; k < vertices.size(); ++k)
      if (vertices[k].text == text) return static_cast<int>(k);
    return -1;
  }
};

inline constexpr int kBrionMaxN = 8;

inline BrionGraph brion_graph(int n) {
  if (n < 0) throw InvalidInput("negative number of variables");
  if (n > kBrionMaxN) throw SizeGuardExceeded("Brion graphs are limited to n <= 8");
  BrionGraph g;
  g.n = n;
  for (const auto& nf : enumerate_normal_forms(n)) {
    BrionVertex v{nf, to_string(nf), brank(nf), oracle::orbit_dimension_estimate(nf.as_form()), 0};
    g.vertices.push_back(std::move(v));
  }
  auto dim = [](const BrionVertex& v) { return v.dimension ? std::round(*v.dimension * 1e6) : 0.0; };
  std::stable_sort(g.vertices.begin(), g.vertices.end(), [&](const BrionVertex& a, const BrionVertex& b) {
    if (a.brank != b.brank) return a.brank > b.brank;
    if (dim(a) != dim(b)) return dim(a) > dim(b);
    return a.text < b.text;
  });
  std::set<std::pair<int, double>> keys;
  for (const auto& v : g.vertices) keys.insert({v.brank, dim(v)});
  for (auto& v : g.vertices)
    v.level = static_cast<int>(std::distance(keys.begin(), keys.find({v.brank, dim(v)})));

  std::map<std::tuple<int, int, int>, int> seen;
  for (int k = 0; k < static_cast<int>(g.vertices.size()); ++k) {
    for (int i = 1; i < n; ++i) {
      const auto d = p_orbit_decompose(g.vertices[k].nf, i);
      std::vector<int> ids;
      for (const auto& r : d.reps) ids.push_back(g.index_of(to_string(r)));
      std::sort(ids.begin(), ids.end());
      std::vector<BrionEdge> add;
      if (d.computed_phi == PhiClass::N0) add.push_back({ids[0], ids[1], i, 2});
      if (d.computed_phi == PhiClass::U0) add.push_back({ids[0], ids[1], i, 1});
      if (d.computed_phi == PhiClass::T0) {
        add.push_back({ids[0], ids[1], i, 1});
        add.push_back({ids[0], ids[2], i, 1});
      }
      for (const auto& e : add) {
        const auto key = std::make_tuple(e.top, e.bottom, e.label);
        const auto it = seen.find(key);
        if (it == seen.end()) {
          seen.emplace(key, e.multiplicity);
          g.edges.push_back(e);
        } else if (it->second != e.multiplicity) {
          throw std::logic_error("inconsistent edge multiplicity in Brion graph");
        }
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const BrionEdge& a, const BrionEdge& b) {
    return std::tie(a.top, a.bottom, a.label) < std::tie(b.top, b.bottom, b.label);
  });
  return g;
}

// One line per edge, endpoints in canonical order, sorted. Used for golden comparison.
inline std::string brion_edge_listing(const BrionGraph& g) {
  std::vector<std::string> lines;
  for (const auto& e : g.edges) {
    const NormalForm* a = &g.vertices[e.top].nf;
    const NormalForm* b = &g.vertices[e.bottom].nf;
    if (canonical_less(*b, *a)) std::swap(a, b);
    lines.push_back(to_string(*a) + (e.multiplicity == 2 ? " == " : " -- ") + to_string(*b) + " [" +
                    std::to_string(e.label) + "]");
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

inline std::string tex_form(const NormalForm& nf) {
  if (nf.is_zero()) return "0";
  std::string out;
  for (const auto& c : nf.components()) {
    const std::string xi = "x_{" + std::to_string(c.i) + "}";
    if (c.eps) out += (out.empty() ? "" : "+") + xi + "^2";
    if (c.delta) out += (out.empty() ? "" : "+") + xi + "x_{" + std::to_string(c.j) + "}";
  }
  return out;
}

inline std::string brion_text(const BrionGraph& g) {
  std::string out = "brion graph n=" + std::to_string(g.n) + "\nvertices:\n";
  for (std::size_t k = 0; k < g.vertices.size(); ++k) {
    const auto& v = g.vertices[k];
    out += "  v" + std::to_string(k) + "  level " + std::to_string(v.level) + "  brank " +
           std::to_string(v.brank) + "  " + v.text + "\n";
  }
  out += "edges:\n";
  for (const auto& e : g.edges) {
    out += "  v" + std::to_string(e.top) + (e.multiplicity == 2 ? " == v" : " -- v") +
           std::to_string(e.bottom) + "  label " + std::to_string(e.label) + "\n";
  }
  return out;
}

inline std::string brion_dot(const BrionGraph& g) {
  std::string out = "graph brion" + std::to_string(g.n) + " {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t k = 0; k < g.vertices.size(); ++k) {
    out += "  v" + std::to_string(k) + " [label=\"" + g.vertices[k].text + "\"];\n";
  }
  std::map<int, std::vector<std::size_t>> rows;
  for (std::size_t k = 0; k < g.vertices.size(); ++k) rows[g.vertices[k].level].push_back(k);
  for (const auto& [level, ids] : rows) {
    out += "  { rank=same;";
    for (auto k : ids) out += " v" + std::to_string(k) + ";";
    out += " }\n";
  }
  for (const auto& e : g.edges) {
    const std::string line = "  v" + std::to_string(e.bottom) + " -- v" + std::to_string(e.top);
    out += line + " [label=\"" + std::to_string(e.label) + "\"];\n";
    if (e.multiplicity == 2) out += line + ";\n";
  }
  return out + "}\n";
}

inline std::string brion_tikz(const BrionGraph& g) {
  std::string out = "\\documentclass[tikz]{standalone}\n\\begin{document}\n"
                    "\\begin{tikzpicture}[scale=0.8]\n"
                    "  \\tikzset{vertex/.style={draw,circle,inner sep=1.5pt,fill=black}}\n";
  std::map<int, int> used;
  for (std::size_t k = 0; k < g.vertices.size(); ++k) {
    const auto& v = g.vertices[k];
    const int x = 3 * used[v.level]++;
    out += "  \\node[vertex,label=right:{\\footnotesize $" + tex_form(v.nf) + "$}] (v" +
           std::to_string(k) + ") at (" + std::to_string(x) + "," + std::to_string(v.level) + ") { };\n";
  }
  for (const auto& e : g.edges) {
    const std::string a = "v" + std::to_string(e.top), b = "v" + std::to_string(e.bottom);
    const std::string label = " node[midway,left] {\\footnotesize $" + std::to_string(e.label) + "$}";
    if (e.multiplicity == 2) {
      out += "  \\draw[thick] ([xshift=-1pt]" + a + ".south) --" + label + " ([xshift=-1pt]" + b +
             ".north);\n";
      out += "  \\draw[thick] ([xshift=1pt]" + a + ".south) -- ([xshift=1pt]" + b + ".north);\n";
    } else {
      out += "  \\draw[thick] (" + a + ") --" + label + " (" + b + ");\n";
    }
  }
  return out + "\\end{tikzpicture}\n\\end{document}\n";
}

}  // namespace borelq
