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

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kodaira/density_local.hpp"
#include "kodaira/global_rational.hpp"
#include "kodaira/tate.hpp"

namespace kodaira::io {

using Json = nlohmann::ordered_json;

// Every report is a JSON object with a "kind" field and, for CSV, a flat table
// of rows sharing one header.  Rationals are always "num/den" strings.

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string fixed(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << std::scientific << x;
  return os.str();
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_escape(cells[i]);
    out += "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

/// Plain aligned columns for the text format.
inline std::string to_text(const Table& t) {
  std::vector<std::size_t> width(t.header.size(), 0);
  for (std::size_t i = 0; i < t.header.size(); ++i) width[i] = t.header[i].size();
  for (const auto& r : t.rows)
    for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out += cells[i];
      if (i + 1 < cells.size()) out += std::string(width[i] - cells[i].size() + 2, ' ');
    }
    out += "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

// ---------------------------------------------------------------------------
// Tate.
// ---------------------------------------------------------------------------
inline Json tate_json(int Q, const WeierstrassCurve& E, const TateOutcome& o) {
  Json j{{"kind", "tate"}, {"Q", Q}, {"curve", E.str()}};
  if (const auto* d = std::get_if<Decided>(&o)) {
    j["decided"] = true;
    j["kodaira"] = d->kodaira.str();
    j["tamagawa"] = d->tamagawa;
    j["iterations"] = d->iterations;
    j["v_min_delta"] = d->v_min_delta ? Json(*d->v_min_delta) : Json(nullptr);
  } else {
    const auto& u = std::get<Undecided>(o);
    j["decided"] = false;
    j["blocking_reason"] = u.blocking_reason;
    j["suggested_depth"] = u.suggested_depth;
  }
  return j;
}

inline Table tate_table(const Json& j) {
  Table t;
  t.header = {"decided", "kodaira", "tamagawa", "iterations", "v_min_delta", "blocking_reason"};
  auto s = [&](const char* k) {
    if (!j.contains(k) || j[k].is_null()) return std::string();
    return j[k].is_string() ? j[k].get<std::string>() : j[k].dump();
  };
  t.rows.push_back({s("decided"), s("kodaira"), s("tamagawa"), s("iterations"), s("v_min_delta"), s("blocking_reason")});
  return t;
}

// ---------------------------------------------------------------------------
// Local densities.
// ---------------------------------------------------------------------------
inline Json key_fields(const DensityKey& k) {
  return Json{{"kodaira", k.kodaira.str()}, {"tamagawa", k.tamagawa}, {"iterations", k.iterations}};
}

inline Json density_json(const DensityReport& rep, const std::vector<TableVerdict>& verdicts) {
  Json j{{"kind", "density-exact"},
         {"form", form_name(rep.form)},
         {"Q", rep.Q},
         {"depth", rep.depth},
         {"max_depth", rep.max_depth}};
  Json entries = Json::array();
  for (const auto& [k, m] : rep.decided) {
    Json e = key_fields(k);
    e["mass"] = to_string(m);
    entries.push_back(e);
  }
  j["entries"] = entries;
  j["undecided"] = to_string(rep.undecided);
  Json by_depth = Json::array();
  for (const auto& u : rep.undecided_by_depth) by_depth.push_back(to_string(u));
  j["undecided_by_depth"] = by_depth;
  j["singular_like"] = to_string(rep.singular_like);
  j["classes_visited"] = rep.class_budget_used;
  j["budget_exhausted"] = rep.budget_exhausted;
  Json vs = Json::array();
  for (const auto& v : verdicts) {
    Json e = key_fields(v.key);
    e["closed_form"] = to_string(v.closed);
    e["decided"] = to_string(v.decided);
    e["verdict"] = verdict_name(v.verdict);
    vs.push_back(e);
  }
  j["verdicts"] = vs;
  return j;
}

inline Table density_table(const DensityReport& rep, const std::vector<TableVerdict>& verdicts) {
  Table t;
  t.header = {"form", "Q", "depth", "kodaira", "tamagawa", "iterations", "mass", "closed_form", "verdict", "undecided"};
  for (const auto& v : verdicts)
    t.rows.push_back({form_name(rep.form), std::to_string(rep.Q), std::to_string(rep.depth), v.key.kodaira.str(),
                      std::to_string(v.key.tamagawa), std::to_string(v.key.iterations), to_string(v.decided),
                      to_string(v.closed), verdict_name(v.verdict), to_string(rep.undecided)});
  return t;
}

struct McVerdict {
  DensityKey key;
  McEntry entry;
  std::optional<Rational> closed;
  std::optional<double> sigma;  // (estimate - closed) / std_error
  Verdict verdict = Verdict::Skip;
};

inline constexpr double kMcSigmaBound = 5.0;

/// Each observed key against its closed form.  Keys whose standard error is
/// zero cannot be judged statistically and are skipped.
inline std::vector<McVerdict> mc_verdicts(const McReport& rep) {
  std::vector<McVerdict> out;
  for (const auto& [k, e] : rep.entries) {
    McVerdict v{k, e, std::nullopt, std::nullopt, Verdict::Skip};
    if (!admissible(k)) {
      v.verdict = Verdict::Fail;
    } else {
      v.closed = closed_form(rep.Q, k);
      if (e.std_error > 0) {
        v.sigma = (e.estimate - static_cast<double>(to_long_double(*v.closed))) / e.std_error;
        v.verdict = std::abs(*v.sigma) <= kMcSigmaBound ? Verdict::Pass : Verdict::Fail;
      }
    }
    out.push_back(v);
  }
  return out;
}

inline Json mc_json(const McReport& rep, const std::vector<McVerdict>& verdicts) {
  Json j{{"kind", "density-mc"},        {"form", form_name(rep.form)}, {"Q", rep.Q},
         {"samples", rep.samples},      {"tail_depth", rep.tail_depth}, {"seed", rep.seed},
         {"unresolved", rep.unresolved}};
  Json entries = Json::array();
  for (const auto& v : verdicts) {
    Json e = key_fields(v.key);
    e["hits"] = v.entry.hits;
    e["estimate"] = v.entry.estimate;
    e["std_error"] = v.entry.std_error;
    e["closed_form"] = v.closed ? Json(to_string(*v.closed)) : Json(nullptr);
    e["sigma"] = v.sigma ? Json(*v.sigma) : Json(nullptr);
    e["verdict"] = verdict_name(v.verdict);
    entries.push_back(e);
  }
  j["entries"] = entries;
  McEntry iter = rep.iterations_at_least(1);
  j["iterations_at_least_1"] = Json{{"hits", iter.hits}, {"estimate", iter.estimate}, {"std_error", iter.std_error}};
  return j;
}

inline Table mc_table(const McReport& rep, const std::vector<McVerdict>& verdicts) {
  Table t;
  t.header = {"form", "Q", "kodaira", "tamagawa", "iterations", "hits", "estimate", "std_error", "closed_form", "sigma", "verdict"};
  for (const auto& v : verdicts)
    t.rows.push_back({form_name(rep.form), std::to_string(rep.Q), v.key.kodaira.str(), std::to_string(v.key.tamagawa),
                      std::to_string(v.key.iterations), std::to_string(v.entry.hits), fixed(v.entry.estimate),
                      fixed(v.entry.std_error), v.closed ? to_string(*v.closed) : "", v.sigma ? fixed(*v.sigma, 3) : "",
                      verdict_name(v.verdict)});
  return t;
}

inline Json table_json(int Q, const std::vector<DensityKey>& keys, const ClosedFormTotals& totals) {
  Json j{{"kind", "table"}, {"Q", Q}};
  Json entries = Json::array();
  for (const auto& k : keys) {
    Json e = key_fields(k);
    e["mass"] = to_string(closed_form(Q, k));
    entries.push_back(e);
  }
  j["entries"] = entries;
  Json per_type = Json::array();
  for (const auto& [name, v] : totals.per_type) per_type.push_back(Json{{"type", name}, {"mass", to_string(v)}});
  j["per_type_totals"] = per_type;
  j["grand_total_k0"] = to_string(totals.grand_total_k0);
  j["grand_total_all_k"] = to_string(totals.grand_total_all_k);
  return j;
}

inline Table closed_table(int Q, const std::vector<DensityKey>& keys) {
  Table t;
  t.header = {"Q", "kodaira", "tamagawa", "iterations", "mass"};
  for (const auto& k : keys)
    t.rows.push_back({std::to_string(Q), k.kodaira.str(), std::to_string(k.tamagawa), std::to_string(k.iterations),
                      to_string(closed_form(Q, k))});
  return t;
}

inline Json uniformity_json(const UniformityReport& r) {
  return Json{{"kind", "uniformity"},
              {"form", form_name(r.form)},
              {"Q", r.Q},
              {"depth", r.depth},
              {"inputs", r.inputs},
              {"reduced_classes", r.reduced_classes},
              {"max_deviation", to_string(r.max_deviation)}};
}

inline Table uniformity_table(const UniformityReport& r) {
  return {{"form", "Q", "depth", "inputs", "reduced_classes", "max_deviation"},
          {{form_name(r.form), std::to_string(r.Q), std::to_string(r.depth), std::to_string(r.inputs),
            std::to_string(r.reduced_classes), to_string(r.max_deviation)}}};
}

// ---------------------------------------------------------------------------
// Global side.
// ---------------------------------------------------------------------------
inline Json zeta_json(long long q, int s, const Rational& value, const std::optional<EulerProduct>& euler, int D) {
  Json j{{"kind", "zeta"}, {"q", q}, {"s", s}, {"value", to_string(value)}};
  if (euler) {
    long double exact = to_long_double(value);
    j["euler_degree"] = D;
    j["euler_product"] = static_cast<double>(euler->value);
    j["relative_error"] = static_cast<double>(std::fabs(euler->value / exact - 1));
  }
  return j;
}

inline Table zeta_table(const Json& j) {
  Table t;
  t.header = {"q", "s", "value"};
  t.rows.push_back({j["q"].dump(), j["s"].dump(), j["value"].get<std::string>()});
  if (j.contains("euler_product")) {
    t.header.insert(t.header.end(), {"euler_degree", "euler_product", "relative_error"});
    t.rows[0].insert(t.rows[0].end(), {j["euler_degree"].dump(), fixed(j["euler_product"].get<double>(), 15),
                                       fixed(j["relative_error"].get<double>(), 3)});
  }
  return t;
}

inline Json global_formula_json(long long q, const std::vector<int>& degrees, int k, const Rational& value) {
  return Json{{"kind", "global-formula"}, {"q", q}, {"s_degrees", degrees}, {"k", k}, {"value", to_string(value)}};
}

inline Table global_formula_table(const Json& j) {
  std::string degs;
  for (const auto& d : j["s_degrees"]) degs += (degs.empty() ? "" : " ") + d.dump();
  return {{"q", "s_degrees", "k", "value"}, {{j["q"].dump(), degs, j["k"].dump(), j["value"].get<std::string>()}}};
}

struct CensusVerdicts {
  std::optional<double> tolerance;
  std::vector<Verdict> per_row;
};

inline Json census_json(const GlobalDensityResult& r, const CensusVerdicts& v) {
  Json j{{"kind", "global-census"}, {"q", r.q}, {"k", r.k}, {"mode", r.sampled ? "sampled" : "exhaustive"}};
  if (r.sampled) {
    j["samples"] = r.samples;
    j["seed"] = r.seed;
  }
  j["formula"] = to_string(r.formula);
  if (v.tolerance) j["tolerance"] = *v.tolerance;
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    Json e{{"d", row.d},         {"total", row.total},
           {"singular", row.singular}, {"pass", row.pass},
           {"fraction", to_string(row.fraction)}, {"formula", to_string(r.formula)}};
    if (v.tolerance) e["verdict"] = verdict_name(v.per_row[i]);
    rows.push_back(e);
  }
  j["rows"] = rows;
  return j;
}

inline Table census_table(const GlobalDensityResult& r, const CensusVerdicts& v) {
  Table t;
  t.header = {"d", "total", "singular", "pass", "fraction", "formula"};
  if (v.tolerance) t.header.push_back("verdict");
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    t.rows.push_back({std::to_string(row.d), std::to_string(row.total), std::to_string(row.singular),
                      std::to_string(row.pass), to_string(row.fraction), to_string(r.formula)});
    if (v.tolerance) t.rows.back().push_back(verdict_name(v.per_row[i]));
  }
  return t;
}

}  // namespace kodaira::io
