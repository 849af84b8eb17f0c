/* Copyright 2026 The kodaira Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kodaira/report_io.hpp"

namespace kodaira::cli {

enum ExitCode : int {
  kPass = 0,
  kFail = 1,
  kPassWithSkips = 2,
  kUsage = 64,
  kDataError = 65,
  kSoftware = 70,
};

enum class Format { Json, Csv, Text };

/// Everything a run depends on.  Identical configs give identical bytes.
struct RunConfig {
  std::string command;
  int q = 0;
  std::string modulus;  // comma-separated, low to high; empty for the default table
  std::string form;     // empty: chosen from the characteristic
  std::string curve;
  int depth = 0;
  long long budget = 50'000'000;
  std::uint64_t samples = 100'000;
  int tail_depth = 16;
  std::uint64_t seed = 1;
  int max_n = 8;
  int max_k = 1;
  int s = 10;
  int euler_degree = 0;
  int k = 0;
  std::string s_degrees = "1";
  int d_max = 1;
  std::optional<double> tolerance;
  int workers = 1;
  Format format = Format::Json;
  std::string output;
};

inline std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  std::size_t pos = 0;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      for (std::size_t i = used; i < item.size(); ++i)
        if (!std::isspace(static_cast<unsigned char>(item[i]))) throw ParseError(pos + i, "bad integer '" + item + "'");
    } catch (const std::logic_error&) {
      throw ParseError(pos, "bad integer '" + item + "'");
    }
    pos += item.size() + 1;
  }
  if (out.empty()) throw ParseError(0, "empty list");
  return out;
}

/// --q with an optional --modulus (n+1 integers, low to high, monic).
inline Field resolve_field(int q, const std::string& modulus) {
  if (q < 2) fail(ErrorKind::InvalidField, "--q must be a prime power >= 2");
  if (modulus.empty()) return FiniteField::standard(q);
  int p = 2;
  while (q % p != 0) ++p;
  std::vector<int> m = parse_int_list(modulus);
  int n = static_cast<int>(m.size()) - 1;
  long long size = 1;
  for (int i = 0; i < n; ++i) size *= p;
  if (n < 1 || size != q) fail(ErrorKind::InvalidField, "modulus degree does not match --q");
  return FiniteField::make(p, n, m);
}

inline FormTag resolve_form(const RunConfig& cfg, const Field& F) {
  FormTag f = cfg.form.empty() ? form_for_characteristic(F->p()) : parse_form(cfg.form);
  check_form_characteristic(f, F->p());
  return f;
}

struct Output {
  io::Json json;
  io::Table table;
  int code = kPass;
};

inline int combine(const std::vector<Verdict>& vs) {
  bool skip = false;
  for (Verdict v : vs) {
    if (v == Verdict::Fail) return kFail;
    if (v == Verdict::Skip) skip = true;
  }
  return skip ? kPassWithSkips : kPass;
}

inline Output run_command(const RunConfig& cfg) {
  Output out;
  const std::string& c = cfg.command;
  if (c == "tate") {
    Field F = resolve_field(cfg.q, cfg.modulus);
    WeierstrassCurve E = parse_curve(F, cfg.curve);
    TateOutcome o = run_tate(E);
    out.json = io::tate_json(F->q(), E, o);
    out.table = io::tate_table(out.json);
    out.code = is_decided(o) ? kPass : kPassWithSkips;
  } else if (c == "density-exact") {
    Field F = resolve_field(cfg.q, cfg.modulus);
    EnumerateOptions opt;
    opt.max_depth = cfg.depth;
    opt.class_budget = cfg.budget;
    opt.workers = cfg.workers;
    DensityReport rep = enumerate_exact(resolve_form(cfg, F), F, opt);
    auto verdicts = compare_table(rep, cfg.max_n, cfg.max_k);
    out.json = io::density_json(rep, verdicts);
    out.table = io::density_table(rep, verdicts);
    std::vector<Verdict> vs;
    for (const auto& v : verdicts) vs.push_back(v.verdict);
    out.code = combine(vs);
  } else if (c == "density-mc") {
    Field F = resolve_field(cfg.q, cfg.modulus);
    McOptions opt;
    opt.samples = cfg.samples;
    opt.tail_depth = cfg.tail_depth;
    opt.seed = cfg.seed;
    opt.workers = cfg.workers;
    McReport rep = estimate_mc(resolve_form(cfg, F), F, opt);
    auto verdicts = io::mc_verdicts(rep);
    out.json = io::mc_json(rep, verdicts);
    out.table = io::mc_table(rep, verdicts);
    std::vector<Verdict> vs;
    for (const auto& v : verdicts) vs.push_back(v.verdict);
    out.code = combine(vs);
  } else if (c == "table") {
    Field F = resolve_field(cfg.q, cfg.modulus);
    auto keys = table_keys(cfg.max_n, cfg.max_k);
    out.json = io::table_json(F->q(), keys, closed_form_totals(F->q()));
    out.table = io::closed_table(F->q(), keys);
  } else if (c == "uniformity") {
    Field F = resolve_field(cfg.q, cfg.modulus);
    UniformityReport r = pushforward_uniformity(F, cfg.depth, cfg.budget);
    out.json = io::uniformity_json(r);
    out.table = io::uniformity_table(r);
    out.code = r.max_deviation == Rational(0) ? kPass : kFail;
  } else if (c == "zeta") {
    Rational z = zeta_value(cfg.q, cfg.s);
    std::optional<EulerProduct> euler;
    if (cfg.euler_degree > 0) euler = euler_product_truncated(resolve_field(cfg.q, cfg.modulus), cfg.s, cfg.euler_degree);
    out.json = io::zeta_json(cfg.q, cfg.s, z, euler, cfg.euler_degree);
    out.table = io::zeta_table(out.json);
  } else if (c == "global-formula") {
    std::vector<int> degrees = parse_int_list(cfg.s_degrees);
    Rational v = global_density_formula(cfg.q, degrees, cfg.k);
    out.json = io::global_formula_json(cfg.q, degrees, cfg.k, v);
    out.table = io::global_formula_table(out.json);
  } else if (c == "global-census") {
    Field F = resolve_field(cfg.q, cfg.modulus);
    CensusOptions opt;
    opt.sampled = cfg.samples > 0;
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    opt.workers = cfg.workers;
    if (cfg.budget > 0) opt.budget = cfg.budget;
    GlobalDensityResult r = empirical_global(F, cfg.k, cfg.d_max, opt);
    io::CensusVerdicts v;
    v.tolerance = cfg.tolerance;
    if (cfg.tolerance) {
      long double target = to_long_double(r.formula);
      for (const auto& row : r.rows)
        v.per_row.push_back(std::fabs(to_long_double(row.fraction) - target) <= *cfg.tolerance ? Verdict::Pass
                                                                                              : Verdict::Fail);
    }
    out.json = io::census_json(r, v);
    out.table = io::census_table(r, v);
    out.code = combine(v.per_row);
  } else {
    throw std::logic_error("unknown command " + c);
  }
  return out;
}

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::NotIntegral:
    case ErrorKind::InvalidField:
      return kDataError;
    default:
      return kSoftware;
  }
}

/// Parses argv, runs the command and writes the report.  Returns the exit code.
inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kodaira types, Tamagawa numbers and local/global densities of Weierstrass curves over F_q((t))",
               "kodaira"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.workers = default_workers();
  std::string format = "json";

  auto common = [&](CLI::App* sub, bool field = true) {
    if (field) {
      sub->add_option("--q", cfg.q, "residue field size (prime, or 4, 8, 9, 16, 25, 27 with the default modulus)")
          ->required();
      sub->add_option("--modulus", cfg.modulus, "defining polynomial over F_p, comma-separated, low to high");
    }
    sub->add_option("--format", format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--output", cfg.output, "write the report here instead of stdout");
    sub->add_option("--workers", cfg.workers, "worker threads (default: KODAIRA_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
  };

  auto* tate = app.add_subcommand("tate", "run Tate's algorithm on one curve");
  common(tate);
  tate->add_option("--curve", cfg.curve, "\"[a1, a2, a3, a4, a6]\" in the uniformizer p")->required();

  auto* exact = app.add_subcommand("density-exact", "exact densities by residue-class enumeration");
  common(exact);
  exact->add_option("--form", cfg.form, "G1 | G2 | G3 | LONG (default: from the characteristic)");
  exact->add_option("--depth", cfg.depth, "maximum digit depth")->required()->check(CLI::PositiveNumber);
  exact->add_option("--budget", cfg.budget, "visited-class budget")->check(CLI::PositiveNumber);
  exact->add_option("--max-n", cfg.max_n, "largest N in the compared table")->check(CLI::PositiveNumber);
  exact->add_option("--max-k", cfg.max_k, "largest iteration count in the compared table")->check(CLI::NonNegativeNumber);

  auto* mc = app.add_subcommand("density-mc", "Monte Carlo densities");
  common(mc);
  mc->add_option("--form", cfg.form, "G1 | G2 | G3 | LONG (default: from the characteristic)");
  mc->add_option("--samples", cfg.samples, "number of samples")->required();
  mc->add_option("--tail-depth", cfg.tail_depth, "digits drawn per coefficient")->check(CLI::PositiveNumber);
  mc->add_option("--seed", cfg.seed, "64-bit seed");

  auto* table = app.add_subcommand("table", "closed-form density table");
  common(table);
  table->add_option("--max-n", cfg.max_n, "largest N listed")->check(CLI::PositiveNumber);
  table->add_option("--max-k", cfg.max_k, "largest iteration count listed")->check(CLI::NonNegativeNumber);

  auto* unif = app.add_subcommand("uniformity", "pushforward uniformity of the reduction map");
  common(unif);
  unif->add_option("--depth", cfg.depth, "digit depth")->required()->check(CLI::PositiveNumber);
  unif->add_option("--budget", cfg.budget, "input-class budget")->check(CLI::PositiveNumber);

  auto* zeta = app.add_subcommand("zeta", "zeta function of F_q(t)");
  common(zeta);
  zeta->add_option("--s", cfg.s, "integer argument >= 2")->required();
  zeta->add_option("--euler-degree", cfg.euler_degree, "also evaluate the Euler product over places up to this degree");

  auto* gf = app.add_subcommand("global-formula", "global density of curves minimal up to k iterations");
  common(gf, false);
  gf->add_option("--q", cfg.q, "constant field size")->required();
  gf->add_option("--k", cfg.k, "iteration bound")->check(CLI::NonNegativeNumber);
  gf->add_option("--s-degrees", cfg.s_degrees, "degrees of the places in S, comma-separated");

  auto* census = app.add_subcommand("global-census", "census over curves with polynomial coefficients");
  common(census);
  census->add_option("--k", cfg.k, "iteration bound")->check(CLI::NonNegativeNumber);
  census->add_option("--dmax", cfg.d_max, "largest coefficient degree")->required()->check(CLI::PositiveNumber);
  census->add_option("--sample", cfg.samples, "sample this many curves per degree instead of all");
  census->add_option("--seed", cfg.seed, "64-bit seed for --sample");
  census->add_option("--budget", cfg.budget, "curve budget per degree in exhaustive mode");
  census->add_option("--tolerance", cfg.tolerance, "pass iff every fraction is within this of the formula");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return kUsage;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (cfg.command == "global-census" && census->count("--sample") == 0) cfg.samples = 0;
  if (cfg.command == "global-census" && census->count("--budget") == 0) cfg.budget = 0;
  cfg.format = format == "csv" ? Format::Csv : (format == "text" ? Format::Text : Format::Json);

  Output result;
  try {
    result = run_command(cfg);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kSoftware;
  }

  std::string body;
  switch (cfg.format) {
    case Format::Json: body = result.json.dump(2) + "\n"; break;
    case Format::Csv: body = io::to_csv(result.table); break;
    case Format::Text: body = io::to_text(result.table); break;
  }
  if (cfg.output.empty()) {
    out << body;
  } else {
    std::ofstream f(cfg.output, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << cfg.output << "\n";
      return kSoftware;
    }
    f << body;
  }
  return result.code;
}

}  // namespace kodaira::cli
