/*
 * Copyright 2026 The ontomatch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Precision / recall / F-measure against a reference alignment, and the
// side-by-side comparison of a MILA run with a baseline run.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ontomatch/alignment.hpp"
#include "ontomatch/error.hpp"
#include "ontomatch/matcher.hpp"
#include "ontomatch/text.hpp"

namespace ontomatch {

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::size_t n_alignment = 0;  // |A|
  std::size_t n_reference = 0;  // |R|
  std::size_t n_correct = 0;    // |A ∩ R|
};

inline EvalReport evaluate(const std::set<std::pair<std::string, std::string>>& a, const ReferenceAlignment& r) {
  EvalReport e;
  e.n_alignment = a.size();
  e.n_reference = r.size();
  for (const auto& p : a) {
    if (r.pairs.count(p)) ++e.n_correct;
  }
  e.precision = e.n_alignment ? static_cast<double>(e.n_correct) / static_cast<double>(e.n_alignment) : 0.0;
  e.recall = e.n_reference ? static_cast<double>(e.n_correct) / static_cast<double>(e.n_reference) : 0.0;
  double sum = e.precision + e.recall;
  e.f_measure = sum > 0 ? 2.0 * e.precision * e.recall / sum : 0.0;
  return e;
}

// Set-based: confidence and duplicate rows do not matter.
inline EvalReport evaluate(const Alignment& a, const ReferenceAlignment& r) { return evaluate(a.pairs(), r); }

inline std::string render_eval_text(const EvalReport& e) {
  std::string out;
  out += "precision\t" + format_fixed(e.precision, 3) + "\n";
  out += "recall\t" + format_fixed(e.recall, 3) + "\n";
  out += "f_measure\t" + format_fixed(e.f_measure, 3) + "\n";
  out += "|A|\t" + std::to_string(e.n_alignment) + "\n";
  out += "|R|\t" + std::to_string(e.n_reference) + "\n";
  out += "|A∩R|\t" + std::to_string(e.n_correct) + "\n";
  return out;
}

inline nlohmann::json eval_to_json(const EvalReport& e) {
  return {{"precision", e.precision}, {"recall", e.recall},       {"f_measure", e.f_measure},
          {"n_alignment", e.n_alignment}, {"n_reference", e.n_reference}, {"n_correct", e.n_correct}};
}

// What compare_runs needs from one run.
struct RunSummary {
  std::string pipeline;
  std::string source_onto;
  std::string target_onto;
  std::size_t k = 0;
  double tau = 0.0;
  std::string provider_fingerprint;
  std::size_t llm_query_count = 0;
  std::size_t hcb_count = 0;
  std::size_t correspondences = 0;
  double match_seconds = 0.0;
  EvalReport eval;
};

inline RunSummary summarize(const MatchRunReport& r, const EvalReport& e) {
  RunSummary s;
  s.pipeline = std::string(pipeline_name(r.pipeline));
  s.source_onto = r.alignment.source_onto;
  s.target_onto = r.alignment.target_onto;
  s.k = r.alignment.k;
  s.tau = r.alignment.tau;
  s.provider_fingerprint = r.alignment.provider_fingerprint;
  s.llm_query_count = r.llm_query_count;
  s.hcb_count = r.hcb_count;
  s.correspondences = r.alignment.correspondences.size();
  auto it = r.phase_seconds.find("match");
  s.match_seconds = it == r.phase_seconds.end() ? 0.0 : it->second;
  s.eval = e;
  return s;
}

inline RunSummary summarize(const nlohmann::json& report, const EvalReport& e) {
  RunSummary s;
  try {
    s.pipeline = report.at("pipeline").get<std::string>();
    s.source_onto = report.at("source_onto").get<std::string>();
    s.target_onto = report.at("target_onto").get<std::string>();
    s.k = report.at("k").get<std::size_t>();
    s.tau = report.at("tau").get<double>();
    s.provider_fingerprint = report.at("provider_fingerprint").get<std::string>();
    s.llm_query_count = report.at("llm_query_count").get<std::size_t>();
    s.hcb_count = report.at("hcb_count").get<std::size_t>();
    s.correspondences = report.at("correspondences").get<std::size_t>();
    s.match_seconds = report.at("phase_seconds").value("match", 0.0);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::MalformedRecord, std::string("run report: ") + ex.what());
  }
  s.eval = e;
  return s;
}

enum class MetricKind { Ratio, Count, Seconds };

struct ComparisonRow {
  std::string metric;
  MetricKind kind = MetricKind::Count;
  double mila = 0.0;
  double baseline = 0.0;
  double ratio = 1.0;  // mila / baseline; NaN when undefined
};

struct Comparison {
  RunSummary mila;
  RunSummary baseline;
  std::vector<ComparisonRow> rows;
};

inline double safe_ratio(double a, double b) {
  if (b == 0.0) return a == 0.0 ? 1.0 : std::numeric_limits<double>::quiet_NaN();
  return a / b;
}

inline Comparison compare_runs(const RunSummary& mila, const RunSummary& base) {
  if (mila.k != base.k || mila.tau != base.tau || mila.provider_fingerprint != base.provider_fingerprint ||
      mila.source_onto != base.source_onto || mila.target_onto != base.target_onto) {
    throw Error(ErrorCode::MismatchedInputs, "runs were produced from different inputs or build parameters");
  }
  Comparison c{mila, base, {}};
  auto add = [&](std::string name, MetricKind kind, double a, double b) {
    c.rows.push_back({std::move(name), kind, a, b, safe_ratio(a, b)});
  };
  add("precision", MetricKind::Ratio, mila.eval.precision, base.eval.precision);
  add("recall", MetricKind::Ratio, mila.eval.recall, base.eval.recall);
  add("f_measure", MetricKind::Ratio, mila.eval.f_measure, base.eval.f_measure);
  add("correspondences", MetricKind::Count, static_cast<double>(mila.correspondences),
      static_cast<double>(base.correspondences));
  add("llm_queries", MetricKind::Count, static_cast<double>(mila.llm_query_count),
      static_cast<double>(base.llm_query_count));
  add("hcb_count", MetricKind::Count, static_cast<double>(mila.hcb_count), static_cast<double>(base.hcb_count));
  add("match_time", MetricKind::Seconds, mila.match_seconds, base.match_seconds);
  return c;
}

namespace detail {
inline std::string render_value(const ComparisonRow& row, double v) {
  switch (row.kind) {
    case MetricKind::Ratio: return format_fixed(v, 3);
    case MetricKind::Count: return std::to_string(static_cast<long long>(std::llround(v)));
    case MetricKind::Seconds: return format_hms(v);
  }
  return {};
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}
}  // namespace detail

// Aligned columns: metric (18 wide), mila, baseline (12 wide), ratio.
inline std::string render_comparison_text(const Comparison& c) {
  std::string out = detail::pad("metric", 18) + detail::pad("mila", 12) + detail::pad("baseline", 12) +
                    "mila/baseline\n";
  for (const auto& row : c.rows) {
    out += detail::pad(row.metric, 18) + detail::pad(detail::render_value(row, row.mila), 12) +
           detail::pad(detail::render_value(row, row.baseline), 12) +
           (std::isnan(row.ratio) ? std::string("n/a") : format_fixed(row.ratio, 3)) + "\n";
  }
  return out;
}

// Full precision; times in seconds.
inline std::string render_comparison_tsv(const Comparison& c) {
  std::string out = "metric\tmila\tbaseline\tratio\n";
  for (const auto& row : c.rows) {
    out += row.metric + "\t" + format_double(row.mila) + "\t" + format_double(row.baseline) + "\t" +
           (std::isnan(row.ratio) ? std::string("nan") : format_double(row.ratio)) + "\n";
  }
  return out;
}

// Per-run metrics across repeated runs of one pipeline on the same inputs.
// Each run keeps its own alignment; nothing is voted across runs.
struct MetricSpread {
  std::string metric;
  double mean = 0.0;
  double variance = 0.0;  // sample variance, 0 for a single run
  double min = 0.0;
  double max = 0.0;
};

struct RunSetStats {
  std::string pipeline;
  std::size_t runs = 0;
  std::vector<MetricSpread> metrics;
};

inline RunSetStats summarize_runs(const std::vector<RunSummary>& runs) {
  if (runs.empty()) throw Error(ErrorCode::InvalidParameter, "no runs to summarize");
  const auto& first = runs.front();
  for (const auto& r : runs) {
    if (r.pipeline != first.pipeline || r.k != first.k || r.tau != first.tau ||
        r.provider_fingerprint != first.provider_fingerprint || r.source_onto != first.source_onto ||
        r.target_onto != first.target_onto) {
      throw Error(ErrorCode::MismatchedInputs, "runs differ in pipeline, inputs or build parameters");
    }
  }
  RunSetStats out{first.pipeline, runs.size(), {}};
  auto add = [&](std::string name, auto field) {
    MetricSpread m{std::move(name), 0.0, 0.0, field(first), field(first)};
    for (const auto& r : runs) {
      double v = field(r);
      m.mean += v;
      m.min = std::min(m.min, v);
      m.max = std::max(m.max, v);
    }
    m.mean /= static_cast<double>(runs.size());
    if (runs.size() > 1) {
      for (const auto& r : runs) m.variance += (field(r) - m.mean) * (field(r) - m.mean);
      m.variance /= static_cast<double>(runs.size() - 1);
    }
    out.metrics.push_back(std::move(m));
  };
  add("precision", [](const RunSummary& r) { return r.eval.precision; });
  add("recall", [](const RunSummary& r) { return r.eval.recall; });
  add("f_measure", [](const RunSummary& r) { return r.eval.f_measure; });
  add("correspondences", [](const RunSummary& r) { return static_cast<double>(r.correspondences); });
  add("llm_queries", [](const RunSummary& r) { return static_cast<double>(r.llm_query_count); });
  add("hcb_count", [](const RunSummary& r) { return static_cast<double>(r.hcb_count); });
  add("match_time", [](const RunSummary& r) { return r.match_seconds; });
  return out;
}

inline std::string render_run_set_tsv(const RunSetStats& s) {
  std::string out = "# " + s.pipeline + "\truns=" + std::to_string(s.runs) + "\n";
  out += "metric\tmean\tvariance\tmin\tmax\n";
  for (const auto& m : s.metrics) {
    out += m.metric + "\t" + format_double(m.mean) + "\t" + format_double(m.variance) + "\t" +
           format_double(m.min) + "\t" + format_double(m.max) + "\n";
  }
  return out;
}

}  // namespace ontomatch
