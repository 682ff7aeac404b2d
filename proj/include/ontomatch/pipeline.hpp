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

// The batch stages behind each command-line verb. Output layout under the
// configured directory:
//
//   kb/source.kb, kb/target.kb, kb/timing.json
//   candidates/source2target.tsv, candidates/target2source.tsv, candidates/timing.json
//   runs/<run id>/{alignment.tsv, trace.tsv, report.json, exchanges.jsonl, config.snapshot[, eval.json]}

#include <chrono>
#include <ctime>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "ontomatch/alignment.hpp"
#include "ontomatch/config.hpp"
#include "ontomatch/embedding.hpp"
#include "ontomatch/error.hpp"
#include "ontomatch/evaluation.hpp"
#include "ontomatch/llm.hpp"
#include "ontomatch/matcher.hpp"
#include "ontomatch/ontology.hpp"
#include "ontomatch/retrieval.hpp"
#include "ontomatch/synthetic.hpp"
#include "ontomatch/text.hpp"

namespace ontomatch {

struct OutputLayout {
  std::filesystem::path root;

  std::filesystem::path kb_dir() const { return root / "kb"; }
  std::filesystem::path source_kb() const { return kb_dir() / "source.kb"; }
  std::filesystem::path target_kb() const { return kb_dir() / "target.kb"; }
  std::filesystem::path kb_timing() const { return kb_dir() / "timing.json"; }
  std::filesystem::path candidates_dir() const { return root / "candidates"; }
  std::filesystem::path s2t() const { return candidates_dir() / "source2target.tsv"; }
  std::filesystem::path t2s() const { return candidates_dir() / "target2source.tsv"; }
  std::filesystem::path predict_timing() const { return candidates_dir() / "timing.json"; }
  std::filesystem::path run_dir(const std::string& id) const { return root / "runs" / id; }
};

inline std::string default_run_id(Pipeline p) {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return std::string(buf) + "-" + std::string(pipeline_name(p));
}

namespace detail {

inline std::pair<Ontology, Ontology> load_pair(const RunConfig& cfg) {
  if (cfg.source_path.empty() || cfg.target_path.empty()) {
    throw Error(ErrorCode::ConfigError, "source.path and target.path are required");
  }
  return {load_ontology(cfg.source_path, cfg.source_name), load_ontology(cfg.target_path, cfg.target_name)};
}

inline void write_timing(const std::filesystem::path& path, const std::string& phase, double seconds,
                         nlohmann::json extra = nlohmann::json::object()) {
  extra["phase"] = phase;
  extra["seconds"] = seconds;
  extra["hms"] = format_hms(seconds);
  write_file_atomic(path, extra.dump(2) + "\n");
}

inline std::optional<double> read_timing(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  auto doc = nlohmann::json::parse(read_file(path), nullptr, false);
  if (doc.is_discarded() || !doc.contains("seconds")) return std::nullopt;
  return doc["seconds"].get<double>();
}

}  // namespace detail

struct BuildKbResult {
  double seconds = 0.0;
  std::size_t source_labels = 0;
  std::size_t target_labels = 0;
  std::size_t dim = 0;
};

inline BuildKbResult cmd_build_kb(const RunConfig& cfg) {
  cfg.validate();
  auto [src, tgt] = detail::load_pair(cfg);
  auto provider = make_provider(cfg);
  OutputLayout out{cfg.out};
  Stopwatch timer;
  auto src_idx = build_entity_term_index(src);
  auto tgt_idx = build_entity_term_index(tgt);
  stream_vector_kb(src, src_idx, *provider, out.source_kb());
  stream_vector_kb(tgt, tgt_idx, *provider, out.target_kb());
  BuildKbResult r{timer.seconds(), src_idx.term_count(), tgt_idx.term_count(), provider->dim()};
  detail::write_timing(out.kb_timing(), "build_kb", r.seconds,
                       {{"source_labels", r.source_labels}, {"target_labels", r.target_labels},
                        {"provider", provider->fingerprint()}});
  return r;
}

struct PredictResult {
  double seconds = 0.0;
  std::size_t s2t_candidates = 0;
  std::size_t t2s_candidates = 0;
};

inline PredictResult cmd_predict(const RunConfig& cfg) {
  cfg.validate();
  auto [src, tgt] = detail::load_pair(cfg);
  auto provider = make_provider(cfg);
  OutputLayout out{cfg.out};
  std::error_code ec;
  if (!std::filesystem::exists(out.source_kb(), ec) || !std::filesystem::exists(out.target_kb(), ec)) {
    throw Error(ErrorCode::InputNotFound, "vector KBs not found under " + out.kb_dir().string() + "; run build-kb first");
  }
  Stopwatch timer;
  auto src_kb = load_vector_kb(out.source_kb());
  auto tgt_kb = load_vector_kb(out.target_kb());
  const std::string fp = provider->fingerprint();
  if (src_kb.fingerprint() != fp || tgt_kb.fingerprint() != fp) {
    throw Error(ErrorCode::StaleKB, "KB provider fingerprint does not match the configured provider; rerun build-kb");
  }
  if (src_kb.ontology() != src.name() || tgt_kb.ontology() != tgt.name()) {
    throw Error(ErrorCode::StaleKB, "KB ontology names do not match the configuration; rerun build-kb");
  }
  auto src_idx = build_entity_term_index(src);
  auto tgt_idx = build_entity_term_index(tgt);
  unsigned workers = cfg.workers ? cfg.workers : default_workers();
  auto dbs = build_candidate_db(src_kb, src_idx, tgt_kb, tgt_idx, cfg.k, cfg.tau, workers);
  write_candidate_db(dbs.source_to_target, out.s2t());
  write_candidate_db(dbs.target_to_source, out.t2s());
  PredictResult r{timer.seconds(), dbs.source_to_target.total_candidates(), dbs.target_to_source.total_candidates()};
  detail::write_timing(out.predict_timing(), "predict", r.seconds,
                       {{"k", cfg.k}, {"tau", cfg.tau}, {"provider", fp}});
  return r;
}

struct MatchResult {
  MatchRunReport report;
  std::filesystem::path run_dir;
};

inline MatchResult cmd_match(const RunConfig& cfg, Pipeline pipeline, std::string run_id = {},
                             const MatchOptions* options = nullptr) {
  cfg.validate();
  auto [src, tgt] = detail::load_pair(cfg);
  OutputLayout out{cfg.out};
  std::error_code ec;
  if (!std::filesystem::exists(out.s2t(), ec) || !std::filesystem::exists(out.t2s(), ec)) {
    throw Error(ErrorCode::InputNotFound, "candidate DBs not found under " + out.candidates_dir().string() +
                                              "; run predict first");
  }
  auto src_ids = src.sorted_ids();
  auto tgt_ids = tgt.sorted_ids();
  auto s2t = load_candidate_db(out.s2t(), &src_ids);
  auto t2s = load_candidate_db(out.t2s(), &tgt_ids);
  auto provider = make_provider(cfg);
  if (s2t.params().k != cfg.k || s2t.params().tau != cfg.tau ||
      s2t.params().provider_fingerprint != provider->fingerprint()) {
    throw Error(ErrorCode::StaleKB, "candidate DBs were built with different k/tau/provider; rerun predict");
  }
  provider.reset();
  auto client = make_llm_client(cfg);
  if (run_id.empty()) run_id = default_run_id(pipeline);
  const auto dir = out.run_dir(run_id);
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::PersistFailure, "cannot create " + dir.string());
  std::filesystem::remove(dir / "exchanges.jsonl", ec);
  ExchangeLog log(dir / "exchanges.jsonl");
  client->set_log(&log);

  MatchContext ctx{src, tgt, s2t, t2s, make_prompt_template(cfg)};
  MatchOptions opt;
  if (options) opt = *options;
  else opt.workers = std::max(1u, cfg.match_workers);
  auto sources = default_sources(src);
  MatchRunReport report = pipeline == Pipeline::Mila ? match_mila(ctx, sources, *client, opt)
                                                     : match_baseline(ctx, sources, *client, opt);
  if (auto t = detail::read_timing(out.kb_timing())) report.phase_seconds["build_kb"] = *t;
  if (auto t = detail::read_timing(out.predict_timing())) report.phase_seconds["predict"] = *t;

  write_alignment(report.alignment, dir / "alignment.tsv");
  write_file_atomic(dir / "trace.tsv", serialize_trace(report.trace));
  write_file_atomic(dir / "report.json", report_to_json(report).dump(2) + "\n");
  write_file_atomic(dir / "config.snapshot", cfg.snapshot());
  return {std::move(report), dir};
}

inline EvalReport cmd_eval(const std::filesystem::path& alignment_path, const std::filesystem::path& reference_path,
                           SplitTag split = SplitTag::Full) {
  auto a = load_alignment(alignment_path);
  auto r = load_reference(reference_path, split);
  return evaluate(a, r);
}

inline RunSummary load_run_summary(const std::filesystem::path& run_dir, const ReferenceAlignment& reference) {
  auto a = load_alignment(run_dir / "alignment.tsv");
  auto doc = nlohmann::json::parse(read_file(run_dir / "report.json"), nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::MalformedRecord, (run_dir / "report.json").string());
  return summarize(doc, evaluate(a, reference));
}

// Expects one run of each pipeline; the order of the two directories does
// not matter.
inline Comparison cmd_compare(const std::filesystem::path& run_a, const std::filesystem::path& run_b,
                              const std::filesystem::path& reference_path, SplitTag split = SplitTag::Full) {
  auto ref = load_reference(reference_path, split);
  auto a = load_run_summary(run_a, ref);
  auto b = load_run_summary(run_b, ref);
  if (a.pipeline == "baseline" && b.pipeline == "mila") std::swap(a, b);
  if (a.pipeline != "mila" || b.pipeline != "baseline") {
    throw Error(ErrorCode::MismatchedInputs, "compare needs one mila run and one baseline run");
  }
  return compare_runs(a, b);
}

inline RunSetStats cmd_variance(const std::vector<std::filesystem::path>& run_dirs,
                                const std::filesystem::path& reference_path, SplitTag split = SplitTag::Full) {
  auto ref = load_reference(reference_path, split);
  std::vector<RunSummary> runs;
  for (const auto& d : run_dirs) runs.push_back(load_run_summary(d, ref));
  return summarize_runs(runs);
}

// Writes the corpus plus a ready-to-use config (oracle client, fixture
// embedder) next to it.
inline void cmd_gen_synthetic(const SyntheticParams& params, const std::filesystem::path& dir) {
  auto corpus = generate_synthetic(params);
  write_synthetic(corpus, dir);
  std::string conf;
  conf += "# synthetic corpus: n=" + std::to_string(params.n_entities) + " h=" + format_double(params.hcb_fraction) +
          " synonyms=" + format_double(params.synonym_rate) + " noise=" + format_double(params.noise) +
          " seed=" + std::to_string(params.seed) + "\n";
  conf += "source.path = source.tsv\nsource.name = " + corpus.source.name() + "\n";
  conf += "target.path = target.tsv\ntarget.name = " + corpus.target.name() + "\n";
  conf += "embedding.kind = deterministic-test\nembedding.dim = " + std::to_string(params.dim) + "\n";
  conf += "embedding.fixture = fixture.vec\n";
  conf += "llm.kind = oracle\nllm.reference = reference.tsv\n";
  conf += "eval.reference = reference.tsv\n";
  conf += "out = out\n";
  write_file_atomic(dir / "synthetic.conf", conf);
}

struct RunAllResult {
  BuildKbResult build;
  PredictResult predict;
  MatchResult match;
  std::optional<EvalReport> eval;
};

inline RunAllResult cmd_run_all(const RunConfig& cfg, Pipeline pipeline, std::string run_id = {}) {
  RunAllResult r;
  r.build = cmd_build_kb(cfg);
  r.predict = cmd_predict(cfg);
  r.match = cmd_match(cfg, pipeline, std::move(run_id));
  if (!cfg.eval_reference.empty() && !r.match.report.aborted) {
    r.eval = cmd_eval(r.match.run_dir / "alignment.tsv", cfg.eval_reference, parse_split_tag(cfg.eval_split));
    write_file_atomic(r.match.run_dir / "eval.json", eval_to_json(*r.eval).dump(2) + "\n");
  }
  return r;
}

}  // namespace ontomatch
