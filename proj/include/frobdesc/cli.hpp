#pragma once

// Command-line front end. run_cli() is the whole program; tools/frobdesc.cpp
// only forwards argv. Exit codes:
//   0 success
//   1 usage error (no or unknown subcommand)
//   2 precondition error, malformed input or bad flag (JSON error object on stdout)
//   3 inconsistency: a verified claim failed for this input

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "curve_cohomology.hpp"
#include "descent_audit.hpp"
#include "fermat_ring.hpp"
#include "hilbert_kunz.hpp"
#include "reports.hpp"
#include "syzygy_bundles.hpp"

namespace frobdesc {

struct CommandResult {
  Json outputs;
  Table table;
};

struct TwistRange {
  int lo = 0;
  int hi = 0;
};

inline TwistRange parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw ParseError("range '" + text + "' is not of the form a..b");
  try {
    std::size_t used = 0;
    const std::string lo = text.substr(0, dots), hi = text.substr(dots + 2);
    TwistRange r{std::stoi(lo, &used), 0};
    if (used != lo.size()) throw ParseError("bad range start");
    r.hi = std::stoi(hi, &used);
    if (used != hi.size()) throw ParseError("bad range end");
    return r;
  } catch (const std::logic_error&) {
    throw ParseError("range '" + text + "' is not of the form a..b");
  }
}

inline std::array<int, 3> parse_exponents(const std::string& text) {
  std::array<int, 3> e{};
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const auto comma = text.find(',', pos);
    if ((i < 2) == (comma == std::string::npos)) throw ParseError("exponents must be e1,e2,e3");
    const std::string part = text.substr(pos, i < 2 ? comma - pos : std::string::npos);
    try {
      std::size_t used = 0;
      e[i] = std::stoi(part, &used);
      if (used != part.size()) throw ParseError("bad exponent '" + part + "'");
    } catch (const std::logic_error&) {
      throw ParseError("bad exponent '" + part + "'");
    }
    pos = comma + 1;
  }
  return e;
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    out.push_back(text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

struct CliOptions {
  int d = 0;
  std::uint64_t characteristic = 0;
  std::uint64_t p = 0;
  std::string exponents = "2,2,2";
  int twist = 0;
  std::string shift_range;
  int e_max = 1;
  std::size_t count = 3;
  long residue = 0;
  std::uint64_t modulus = 1;
  std::string scenario;
  std::string format = "json";
  std::optional<int> nmax_fill;
  bool allow_large = false;
  std::string poly;
  std::string gens;
  std::string primes;
};

namespace commands {

inline CommandResult curve_info(const CliOptions& o) {
  const FermatCurve c(o.d, o.characteristic);
  Json out = curve_json(c);
  out["canonical_twist"] = canonical_twist(c);
  out["h0_canonical"] = h0_line(c, canonical_twist(c));
  out["h1_canonical"] = h1_line(c, canonical_twist(c));
  if (!o.poly.empty()) {
    out["normal_form"] = with_field(c, [&](auto field) { return parse_normal(c, o.poly, field).to_string(); });
  }
  return {out, key_value_table(out)};
}

inline CommandResult hilbert(const CliOptions& o) {
  const FermatCurve c(o.d, o.characteristic);
  const auto range = o.shift_range.empty() ? TwistRange{0, 2 * o.d} : parse_range(o.shift_range);
  if (range.lo > range.hi) throw PreconditionError("empty degree range");
  Json rows = Json::array();
  Table t{{"n", "hilbert_dim", "h0", "h1", "euler_characteristic", "cech_h1_size"}, {}};

  return with_field(c, [&](auto field) -> CommandResult {
    using F = decltype(field);
    std::vector<NormalPoly<F>> gens;
    if (!o.gens.empty()) {
      for (const auto& g : split_list(o.gens)) gens.push_back(parse_normal(c, g, field));
      t.header.push_back("ideal_dim");
    }
    for (int n = range.lo; n <= range.hi; ++n) {
      Json row{{"n", n},
               {"hilbert_dim", hilbert_dim(c, n)},
               {"h0", h0_line(c, n)},
               {"h1", h1_line(c, n)},
               {"euler_characteristic", euler_characteristic(c, n)},
               {"cech_h1_size", cech_h1_basis(c, n).size()}};
      std::vector<std::string> cells{std::to_string(n),           std::to_string(hilbert_dim(c, n)),
                                     std::to_string(h0_line(c, n)), std::to_string(h1_line(c, n)),
                                     std::to_string(euler_characteristic(c, n)),
                                     std::to_string(cech_h1_basis(c, n).size())};
      if (!gens.empty()) {
        const auto dim = ideal_piece_dim<F>(c, gens, n);
        row["ideal_dim"] = dim;
        cells.push_back(std::to_string(dim));
      }
      rows.push_back(row);
      t.add(cells);
    }
    Json out{{"curve", curve_json(c)}, {"rows", rows}};
    if (!gens.empty()) {
      Json g = Json::array();
      for (const auto& x : gens) g.push_back(x.to_string());
      out["generators"] = g;
      out["fill"] = fill_json(fills_at<F>(c, gens, o.nmax_fill));
    }
    return {out, t};
  });
}

inline CommandResult sections(const CliOptions& o) {
  const FermatCurve c(o.d, o.characteristic);
  const auto b = BundleDescriptor::syzygy(c, parse_exponents(o.exponents), o.twist);
  return with_field(c, [&](auto field) -> CommandResult {
    using F = decltype(field);
    const auto space = section_space<F>(b);
    Json basis = Json::array();
    Table t{{"index", "s1", "s2", "s3"}, {}};
    for (std::size_t i = 0; i < space.basis.size(); ++i) {
      const auto& s = space.basis[i];
      basis.push_back(triple_json<F>(s));
      t.add({std::to_string(i), s[0].to_string(), s[1].to_string(), s[2].to_string()});
    }
    return {{{"curve", curve_json(c)}, {"bundle", bundle_json(b)}, {"dimension", space.dimension()}, {"basis", basis}},
            t};
  });
}

inline CommandResult hn(const CliOptions& o) {
  const auto r = hn_filtration_rank2(FermatCurve(o.d, o.p), o.nmax_fill);
  Json out = hn_json(r);
  Table t = key_value_table(out);
  t.add({"zero_free_at", r.zero_free.filled ? std::to_string(r.zero_free.degree) : "inconclusive"});
  for (std::size_t i = 0; i < r.section.size(); ++i) t.add({"section_" + std::to_string(i + 1), r.section[i].to_string()});
  return {out, t};
}

inline CommandResult scan(const CliOptions& o) {
  const FermatCurve c(o.d, o.characteristic);
  const auto b = BundleDescriptor::syzygy(c, parse_exponents(o.exponents), o.twist);
  const auto range = o.shift_range.empty() ? TwistRange{0, 0} : parse_range(o.shift_range);
  const auto r = destabilization_scan(b, range.lo, range.hi);
  return {scan_json(r), scan_table(r)};
}

inline CommandResult hk(const CliOptions& o) {
  const auto r = hk_report(FermatCurve(o.d, o.p), o.e_max, o.allow_large);
  return {hk_json(r), hk_table(r)};
}

inline CommandResult ext_split(const CliOptions& o) {
  const auto r = extension_split_test(FermatCurve(o.d, o.p));
  Json out = split_json(r);
  return {out, key_value_table(out)};
}

inline CommandResult elliptic(const CliOptions& o) {
  Json out = elliptic_json(remark_elliptic_check(o.p));
  return {out, key_value_table(out)};
}

inline CommandResult audit_cmd(const CliOptions& o) {
  std::ifstream in(o.scenario);
  if (!in) throw PreconditionError("cannot open scenario file '" + o.scenario + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  const auto scenario = parse_scenario(doc);
  const auto v = audit(scenario);
  Json out{{"scenario", scenario_json(scenario)}, {"verdict", audit_json(v)}};
  Table t = key_value_table(audit_json(v));
  for (const auto& line : v.trace) t.add({"trace", line});
  return {out, t};
}

inline CommandResult replay(const CliOptions& o) {
  std::vector<std::uint64_t> primes;
  if (!o.primes.empty()) {
    for (const auto& part : split_list(o.primes)) {
      try {
        primes.push_back(std::stoull(part));
      } catch (const std::logic_error&) {
        throw ParseError("bad prime '" + part + "'");
      }
    }
  } else {
    const FermatCurve generic(o.d, 0);
    primes = primes_in_progression(required_ell(generic), static_cast<std::uint64_t>(o.d), o.count);
  }
  const auto r = counterexample_replay(o.d, primes, o.nmax_fill);
  return {replay_json(r), replay_table(r)};
}

inline CommandResult primes(const CliOptions& o) {
  const auto list = primes_in_progression(o.residue, o.modulus, o.count);
  Table t{{"index", "prime"}, {}};
  for (std::size_t i = 0; i < list.size(); ++i) t.add({std::to_string(i), std::to_string(list[i])});
  return {{{"primes", list}}, t};
}

}  // namespace commands

/// Echo of the flags given on the command line, keyed without the leading "--".
inline Json inputs_json(const CLI::App& sub) {
  Json in = Json::object();
  for (const auto* opt : sub.get_options()) {
    if (opt->get_name() == "--help" || opt->count() == 0) continue;
    const auto name = opt->get_name().substr(2);
    if (opt->get_expected_min() == 0) {
      in[name] = true;
    } else {
      in[name] = opt->as<std::string>();
    }
  }
  return in;
}

/// Runs the program on args (without the program name). Reports go to out,
/// diagnostics to err.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations on syzygy bundles over Fermat curves", "frobdesc"};
  app.require_subcommand(1);
  CliOptions o;

  using Handler = std::function<CommandResult(const CliOptions&)>;
  std::vector<std::pair<CLI::App*, Handler>> handlers;

  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_curve = [&](CLI::App* s) {
    s->add_option("--d", o.d, "curve degree")->required();
    s->add_option("--char", o.characteristic, "characteristic (0 for Q)");
  };

  auto* s = app.add_subcommand("curve-info", "genus, canonical twist, and optional normal form");
  add_curve(s);
  s->add_option("--poly", o.poly, "homogeneous polynomial to normal-form");
  handlers.emplace_back(s, commands::curve_info);

  s = app.add_subcommand("hilbert", "Hilbert function, h0/h1 and optional ideal pieces");
  add_curve(s);
  s->add_option("--shift-range", o.shift_range, "degree range a..b");
  s->add_option("--gens", o.gens, "comma-separated ideal generators");
  s->add_option("--nmax-fill", o.nmax_fill, "degree cap for the fill search");
  handlers.emplace_back(s, commands::hilbert);

  s = app.add_subcommand("sections", "global sections of Syz(X^e1,Y^e2,Z^e3)(m)");
  add_curve(s);
  s->add_option("--exponents", o.exponents, "e1,e2,e3");
  s->add_option("--twist", o.twist, "twist m")->required();
  handlers.emplace_back(s, commands::sections);

  s = app.add_subcommand("hn", "Harder-Narasimhan filtration of Syz(X^2p,Y^2p,Z^2p)(3p)");
  s->add_option("--d", o.d, "curve degree")->required();
  s->add_option("--p", o.p, "characteristic")->required();
  s->add_option("--nmax-fill", o.nmax_fill, "degree cap for the zero-freeness certificate");
  handlers.emplace_back(s, commands::hn);

  s = app.add_subcommand("scan", "section-based destabilization scan");
  add_curve(s);
  s->add_option("--exponents", o.exponents, "e1,e2,e3");
  s->add_option("--twist", o.twist, "base twist m")->required();
  s->add_option("--shift-range", o.shift_range, "shift range a..b");
  handlers.emplace_back(s, commands::scan);

  s = app.add_subcommand("hk", "Hilbert-Kunz function of (X^2,Y^2,Z^2)");
  s->add_option("--d", o.d, "curve degree")->required();
  s->add_option("--p", o.p, "characteristic")->required();
  s->add_option("--e-max", o.e_max, "largest Frobenius exponent e (q = p^e)");
  s->add_flag("--allow-large", o.allow_large, "lift the exponent cap");
  handlers.emplace_back(s, commands::hk);

  s = app.add_subcommand("ext-split", "splitting test for the destabilizing extension");
  s->add_option("--d", o.d, "curve degree")->required();
  s->add_option("--p", o.p, "characteristic")->required();
  handlers.emplace_back(s, commands::ext_split);

  s = app.add_subcommand("elliptic", "Frobenius pull-back type on the Fermat cubic");
  s->add_option("--p", o.p, "characteristic")->required();
  handlers.emplace_back(s, commands::elliptic);

  s = app.add_subcommand("audit", "slope audit of a Frobenius-descent scenario");
  s->add_option("--scenario", o.scenario, "scenario JSON document")->required();
  handlers.emplace_back(s, commands::audit_cmd);

  s = app.add_subcommand("replay", "counterexample dossier over primes p = l mod d");
  s->add_option("--d", o.d, "curve degree")->required();
  s->add_option("--count", o.count, "number of primes from the progression");
  s->add_option("--primes", o.primes, "explicit comma-separated primes");
  s->add_option("--nmax-fill", o.nmax_fill, "degree cap for zero-freeness certificates");
  handlers.emplace_back(s, commands::replay);

  s = app.add_subcommand("primes", "primes in an arithmetic progression");
  s->add_option("--residue", o.residue, "residue a")->required();
  s->add_option("--modulus", o.modulus, "modulus m")->required();
  s->add_option("--count", o.count, "how many primes");
  handlers.emplace_back(s, commands::primes);

  for (auto& [sub, h] : handlers) add_format(sub);

  std::vector<std::string> argv_store{"frobdesc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  auto emit = [&](const Json& report, const std::string& format, const Table* table) {
    if (format == "csv" && table) {
      out << to_csv(*table);
    } else {
      out << report.dump(2) << '\n';
    }
  };

  CLI::App* chosen = nullptr;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    for (auto& [sub, h] : handlers) {
      if (sub->parsed()) chosen = sub;
    }
    if (!chosen) {
      app.exit(e, out, err);
      return 1;
    }
    emit({{"command", chosen->get_name()},
          {"error", {{"kind", "usage"}, {"message", e.what()}}},
          {"version", kVersion}},
         "json", nullptr);
    return 2;
  }

  for (auto& [sub, h] : handlers) {
    if (!sub->parsed()) continue;
    const auto start = std::chrono::steady_clock::now();
    Json report{{"command", sub->get_name()}, {"inputs", inputs_json(*sub)}, {"version", kVersion}};
    try {
      auto result = h(o);
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
      report["outputs"] = std::move(result.outputs);
      report["timing_ms"] = ms.count();
      emit(report, o.format, &result.table);
      return 0;
    } catch (const InconsistencyError& e) {
      report["error"] = {{"kind", "inconsistency"}, {"message", e.what()}};
      emit(report, "json", nullptr);
      err << "inconsistency: " << e.what() << '\n';
      return 3;
    } catch (const std::invalid_argument& e) {
      // PreconditionError and ParseError both derive from invalid_argument.
      report["error"] = {{"kind", dynamic_cast<const ParseError*>(&e) ? "parse" : "precondition"},
                         {"message", e.what()}};
      emit(report, "json", nullptr);
      return 2;
    }
  }
  return 1;
}

}  // namespace frobdesc
