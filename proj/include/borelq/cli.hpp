#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "borelq/verify.hpp"

namespace borelq::cli {

using nlohmann::json;

enum Exit { ok = 0, check_failed = 1, usage = 2, guard = 3 };

inline constexpr int kGraphMaxN = 8;

struct Config {
  std::string command;
  int n = -1;
  std::string form;
  int field_level = -1;
  std::string format = "text";
  std::string out_path;
  std::vector<std::string> suites;
};

inline void require_format(const Config& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (c.format == f) return;
  throw InvalidInput("format '" + c.format + "' is not available for " + c.command);
}

inline void require_n(const Config& c, int hi) {
  if (c.n < 0) throw InvalidInput(c.command + " needs -n");
  if (c.n > hi) throw SizeGuardExceeded(c.command + " is limited to n <= " + std::to_string(hi));
}

inline void reject_level(const Config& c) {
  if (c.field_level >= 0) throw InvalidInput("--field-level only applies to verify");
}

inline json matrix_json(const GroupElement& g) {
  json rows = json::array();
  for (int i = 1; i <= g.n(); ++i) {
    json row = json::array();
    for (int j = 1; j <= g.n(); ++j) row.push_back(to_string(g(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline int cmd_normalize(const Config& c, std::ostream& out) {
  reject_level(c);
  require_format(c, {"text", "json"});
  const QuadraticForm q = parse_form(c.form, c.n);
  const NormalizeResult r = normalize(q);
  const bool good = act(r.witness, q) == r.nf.as_form();
  if (c.format == "json") {
    out << json{{"input", to_string(q)},
                {"normal_form", to_string(r.nf)},
                {"witness", matrix_json(r.witness)},
                {"substitution", substitution_text(r.witness)},
                {"level", r.level()},
                {"verified", good}}
               .dump()
        << "\n";
  } else {
    out << "input: " << to_string(q) << "\n"
        << "normal form: " << to_string(r.nf) << "\n"
        << "witness: " << substitution_text(r.witness) << "\n"
        << to_string(r.witness) << "level: " << r.level() << "\n"
        << "act(witness, input) == normal form: " << (good ? "OK" : "MISMATCH") << "\n";
  }
  return good ? ok : check_failed;
}

inline int cmd_census(const Config& c, std::ostream& out) {
  reject_level(c);
  require_format(c, {"text", "json"});
  require_n(c, kCensusMaxN);
  const auto rows = census(c.n);
  if (c.format == "text") {
    out << census_table(rows);
    return ok;
  }
  for (const auto& r : rows) {
    json line{{"form", to_string(r.nf)}, {"brank", r.brank}, {"nondegenerate", r.nondegenerate}};
    line["cc"] = r.cc ? json(*r.cc) : json(nullptr);
    out << line.dump() << "\n";
  }
  return ok;
}

inline int cmd_counts(const Config& c, std::ostream& out) {
  reject_level(c);
  require_format(c, {"text", "json"});
  require_n(c, kCensusMaxN);
  const int n = c.n;
  const int r = (n + 1) / 2;
  bool good = true;
  const BigInt max_rank = max_rank_count(n);
  const bool catalan_ok = max_rank == catalan(r);
  good = good && catalan_ok;
  json lines = json::array();
  std::string text = "n=" + std::to_string(n) + "\nmax-rank " + max_rank.str() + " = C_" + std::to_string(r) +
                     " = " + catalan(r).str() + ": " + (catalan_ok ? "OK" : "MISMATCH") + "\n";
  lines.push_back({{"n", n}, {"max_rank", max_rank.str()}, {"catalan", catalan(r).str()}, {"ok", catalan_ok}});
  for (int f = 1; f <= r; ++f) {
    const BigInt direct = b_count_direct(n, f);
    const BigInt recursive = b_count_recursive(n, f);
    const BigInt tri = catalan_triangle(r - 1, r - f);
    bool row_ok = direct == recursive && direct == tri;
    std::string row = "b(" + std::to_string(n) + "," + std::to_string(f) + ")=" + direct.str() + "  recursive " +
                      recursive.str() + "  triangle C(" + std::to_string(r - 1) + "," + std::to_string(r - f) +
                      ")=" + tri.str();
    json rec{{"n", n}, {"f", f}, {"direct", direct.str()}, {"recursive", recursive.str()}, {"triangle", tri.str()}};
    if (n % 2) {
      const BigInt even = b_count_direct(n + 1, f);
      row_ok = row_ok && even == direct;
      row += "  b(" + std::to_string(n + 1) + "," + std::to_string(f) + ")=" + even.str();
      rec["next_even"] = even.str();
    }
    rec["ok"] = row_ok;
    good = good && row_ok;
    text += row + ": " + (row_ok ? "OK" : "MISMATCH") + "\n";
    lines.push_back(rec);
  }
  if (c.format == "json") {
    for (const auto& l : lines) out << l.dump() << "\n";
  } else {
    out << text;
  }
  return good ? ok : check_failed;
}

inline int cmd_brion(const Config& c, std::ostream& out) {
  reject_level(c);
  require_format(c, {"text", "dot", "tikz", "json"});
  require_n(c, kGraphMaxN);
  const BrionGraph g = brion_graph(c.n);
  if (c.format == "dot") out << brion_dot(g);
  else if (c.format == "tikz") out << brion_tikz(g);
  else if (c.format == "text") out << brion_text(g);
  else {
    for (std::size_t k = 0; k < g.vertices.size(); ++k) {
      const auto& v = g.vertices[k];
      out << json{{"vertex", k}, {"form", v.text}, {"brank", v.brank}, {"level", v.level}}.dump() << "\n";
    }
    for (const auto& e : g.edges) {
      out << json{{"top", e.top}, {"bottom", e.bottom}, {"label", e.label}, {"multiplicity", e.multiplicity}}
                 .dump()
          << "\n";
    }
  }
  return ok;
}

inline int cmd_covers(const Config& c, std::ostream& out) {
  reject_level(c);
  require_format(c, {"text", "json"});
  require_n(c, kGraphMaxN);
  if (c.format == "text") {
    out << cover_table(c.n);
    return ok;
  }
  for (const auto& q : enumerate_max_rank(c.n))
    for (const auto& label : covers(q)) {
      out << json{{"form", to_string(q)}, {"eps", pi_inv(label).eps}, {"m", label.m}}.dump() << "\n";
    }
  return ok;
}

inline int cmd_weyl(const Config& c, std::ostream& out) {
  reject_level(c);
  require_format(c, {"text", "dot", "tikz", "json"});
  require_n(c, kGraphMaxN);
  const WeylGraph g = weyl_orbit_graph(c.n);
  if (c.format == "dot") out << weyl_dot(g);
  else if (c.format == "tikz") out << weyl_tikz(g);
  else if (c.format == "text") out << weyl_text(g);
  else {
    for (std::size_t k = 0; k < g.vertices.size(); ++k) {
      out << json{{"vertex", k}, {"m", g.vertices[k].m}, {"form", to_string(pi_inv(g.vertices[k]).q)}}.dump()
          << "\n";
    }
    for (const auto& e : g.edges) out << json{{"a", e.a}, {"b", e.b}, {"label", e.label}}.dump() << "\n";
  }
  return ok;
}

inline int cmd_verify(const Config& c, std::ostream& out) {
  require_format(c, {"text", "json"});
  if (c.n < 0) throw InvalidInput("verify needs -n");
  const bool all = c.suites.empty();
  const auto& names = all ? verify::suite_names() : c.suites;
  bool good = true;
  int ran = 0;
  for (const auto& name : names) {
    auto skip = [&](const char* why) {
      if (c.format == "json") out << json{{"suite", name}, {"n", c.n}, {"skipped", why}}.dump() << "\n";
      else out << "SKIP " << name << " n=" << c.n << ": " << why << "\n";
    };
    verify::SuiteResult r;
    // Running everything: suites whose range excludes n are skipped.
    try {
      r = verify::run_suite(name, c.n, c.field_level);
    } catch (const SizeGuardExceeded& e) {
      if (!all) throw;
      skip(e.what());
      continue;
    } catch (const InvalidInput& e) {
      if (!all) throw;
      skip(e.what());
      continue;
    }
    ++ran;
    good = good && r.ok();
    if (c.format == "json") {
      out << json{{"suite", r.suite}, {"n", r.n},         {"level", r.level},       {"checked", r.checked},
                  {"failed", r.failure_count}, {"ok", r.ok()}, {"failures", r.failures}}
                 .dump()
          << "\n";
    } else {
      out << verify::summary_line(r) << "\n";
      for (const auto& f : r.failures) out << "  " << f << "\n";
    }
  }
  if (c.format == "json") out << json{{"summary", true}, {"suites", ran}, {"ok", good}}.dump() << "\n";
  else out << (good ? "PASS" : "FAIL") << " " << ran << " suite(s)\n";
  return good ? ok : check_failed;
}

inline int dispatch(const Config& c, std::ostream& out) {
  if (c.command == "normalize") return cmd_normalize(c, out);
  if (c.command == "census") return cmd_census(c, out);
  if (c.command == "counts") return cmd_counts(c, out);
  if (c.command == "brion") return cmd_brion(c, out);
  if (c.command == "covers") return cmd_covers(c, out);
  if (c.command == "weyl") return cmd_weyl(c, out);
  if (c.command == "verify") return cmd_verify(c, out);
  throw InvalidInput("unknown command " + c.command);
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Borel orbits of quadratic forms in characteristic 2", "borelq"};
  app.require_subcommand(1);
  Config c;
  const std::vector<std::string> formats = {"text", "dot", "tikz", "json"};
  auto common = [&](CLI::App* sub) {
    sub->add_option("-n", c.n, "number of variables")->check(CLI::NonNegativeNumber);
    sub->add_option("--format", c.format, "text, dot, tikz or json (JSON lines)")->check(CLI::IsMember(formats));
    sub->add_option("--out", c.out_path, "write output to this file");
    sub->add_option("--field-level", c.field_level, "oracle field level for verify (0: F_2, 1: F_4)")
        ->check(CLI::Range(0, FieldElement::kMaxLevel));
  };
  auto* normalize_cmd = app.add_subcommand("normalize", "normal form and witness of a form");
  common(normalize_cmd);
  normalize_cmd->add_option("form", c.form, "form such as \"x1^2 + w*x1*x2\"")->required();
  common(app.add_subcommand("census", "all normal forms in n variables"));
  common(app.add_subcommand("counts", "Catalan and triangle counts"));
  common(app.add_subcommand("brion", "Brion graph"));
  common(app.add_subcommand("covers", "double covers of maximal-rank orbits"));
  common(app.add_subcommand("weyl", "symmetric group action on cover labels"));
  auto* verify_cmd = app.add_subcommand("verify", "run oracle and invariant suites");
  common(verify_cmd);
  verify_cmd->add_option("--suite", c.suites, "suite name, repeatable; default all")
      ->check(CLI::IsMember(verify::suite_names()));

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : usage;
  }
  c.command = app.get_subcommands().front()->get_name();

  std::ofstream file;
  if (!c.out_path.empty()) {
    file.open(c.out_path);
    if (!file) {
      err << "error: cannot open " << c.out_path << "\n";
      return usage;
    }
  }
  std::ostream& sink = c.out_path.empty() ? out : file;
  try {
    return dispatch(c, sink);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return usage;
  } catch (const SizeGuardExceeded& e) {
    err << "size guard: " << e.what() << "\n";
    return guard;
  } catch (const LevelCapExceeded& e) {
    err << "level cap: " << e.what() << "\n";
    return guard;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return check_failed;
  }
}

}  // namespace borelq::cli
