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

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ontomatch/ontomatch.hpp"

namespace om = ontomatch;

namespace {

struct GlobalFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> k;
  std::optional<double> tau;
  std::vector<std::string> overrides;
};

om::RunConfig resolve_config(const GlobalFlags& g) {
  om::RunConfig cfg;
  if (!g.config.empty()) cfg = om::load_config(g.config);
  for (const auto& kv : g.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw om::Error(om::ErrorCode::ConfigError, "--set expects key=value, got '" + kv + "'");
    cfg.set(om::trim(std::string_view(kv).substr(0, eq)), std::string_view(kv).substr(eq + 1));
  }
  if (!g.out.empty()) cfg.out = g.out;
  if (g.seed) cfg.seed = *g.seed;
  if (g.k) cfg.k = *g.k;
  if (g.tau) cfg.tau = *g.tau;
  cfg.validate();
  return cfg;
}

om::Pipeline parse_pipeline(const std::string& s) {
  if (s == "mila") return om::Pipeline::Mila;
  if (s == "baseline") return om::Pipeline::Baseline;
  throw om::Error(om::ErrorCode::ConfigError, "--pipeline must be mila or baseline");
}

void print_match(const om::MatchResult& r) {
  const auto& rep = r.report;
  std::printf("%s: %zu correspondences, %zu LLM queries, %zu HCB, %zu unparseable (%s)\n",
              std::string(om::pipeline_name(rep.pipeline)).c_str(), rep.alignment.correspondences.size(),
              rep.llm_query_count, rep.hcb_count, rep.unparseable_count,
              om::format_hms(rep.phase_seconds.count("match") ? rep.phase_seconds.at("match") : 0.0).c_str());
  std::printf("run: %s\n", r.run_dir.string().c_str());
  if (rep.aborted) {
    std::fprintf(stderr, "match aborted after %zu of %zu sources: %s\n", rep.sources_processed, rep.sources_total,
                 rep.error.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ontomatch: retrieval plus LLM ontology matching"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--config", g.config, "key = value configuration file");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--seed", g.seed, "run seed (oracle flips)");
  app.add_option("--k", g.k, "candidates kept per label");
  app.add_option("--tau", g.tau, "score threshold");
  app.add_option("--set", g.overrides, "override a config key (key=value)");

  auto* build = app.add_subcommand("build-kb", "embed both ontologies into vector KBs");
  auto* predict = app.add_subcommand("predict", "build both candidate databases");

  auto* match = app.add_subcommand("match", "run a matching pipeline over the candidate databases");
  std::string pipeline = "mila";
  std::string run_id;
  match->add_option("--pipeline", pipeline)->check(CLI::IsMember({"mila", "baseline"}));
  match->add_option("--run-id", run_id, "run directory name (default: UTC timestamp)");

  auto* run_all = app.add_subcommand("run-all", "build-kb, predict, match and eval in one go");
  run_all->add_option("--pipeline", pipeline)->check(CLI::IsMember({"mila", "baseline"}));
  run_all->add_option("--run-id", run_id);

  auto* eval = app.add_subcommand("eval", "score an alignment against a reference");
  std::string alignment_path, reference_path, split = "full";
  bool as_json = false;
  eval->add_option("--alignment", alignment_path)->required();
  eval->add_option("--reference", reference_path)->required();
  eval->add_option("--split", split)->check(CLI::IsMember({"full", "train", "test"}));
  eval->add_flag("--json", as_json);

  auto* compare = app.add_subcommand("compare", "compare a mila run with a baseline run");
  std::vector<std::string> runs;
  std::string tsv_path;
  compare->add_option("runs", runs, "two run directories")->expected(2)->required();
  compare->add_option("--reference", reference_path)->required();
  compare->add_option("--split", split)->check(CLI::IsMember({"full", "train", "test"}));
  compare->add_option("--tsv", tsv_path, "also write the table as TSV");

  auto* variance = app.add_subcommand("variance", "mean and variance of metrics over repeated runs");
  std::vector<std::string> variance_runs;
  variance->add_option("runs", variance_runs, "run directories of one pipeline")->required();
  variance->add_option("--reference", reference_path)->required();
  variance->add_option("--split", split)->check(CLI::IsMember({"full", "train", "test"}));

  auto* gen = app.add_subcommand("gen-synthetic", "write a synthetic corpus with a known reference");
  om::SyntheticParams sp;
  std::string gen_dir;
  gen->add_option("--n", sp.n_entities)->required();
  gen->add_option("--synonym-rate", sp.synonym_rate);
  gen->add_option("--noise", sp.noise);
  gen->add_option("--hcb-fraction", sp.hcb_fraction, "fraction of HCB pairs");
  gen->add_option("--dim", sp.dim);
  gen->add_option("--dir", gen_dir)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : om::exit_code::kConfig;
  }

  try {
    if (*gen) {
      if (g.seed) sp.seed = *g.seed;
      om::cmd_gen_synthetic(sp, gen_dir);
      std::printf("wrote synthetic corpus to %s\n", gen_dir.c_str());
      return om::exit_code::kSuccess;
    }
    if (*eval) {
      auto rep = om::cmd_eval(alignment_path, reference_path, om::parse_split_tag(split));
      if (as_json) std::cout << om::eval_to_json(rep).dump(2) << "\n";
      else std::cout << om::render_eval_text(rep);
      return om::exit_code::kSuccess;
    }
    if (*compare) {
      auto c = om::cmd_compare(runs[0], runs[1], reference_path, om::parse_split_tag(split));
      std::cout << om::render_comparison_text(c);
      if (!tsv_path.empty()) om::write_file_atomic(tsv_path, om::render_comparison_tsv(c));
      return om::exit_code::kSuccess;
    }
    if (*variance) {
      std::vector<std::filesystem::path> dirs(variance_runs.begin(), variance_runs.end());
      std::cout << om::render_run_set_tsv(om::cmd_variance(dirs, reference_path, om::parse_split_tag(split)));
      return om::exit_code::kSuccess;
    }

    auto cfg = resolve_config(g);
    if (*build) {
      auto r = om::cmd_build_kb(cfg);
      std::printf("build-kb: %zu + %zu labels, dim %zu, %s\n", r.source_labels, r.target_labels, r.dim,
                  om::format_hms(r.seconds).c_str());
      return om::exit_code::kSuccess;
    }
    if (*predict) {
      auto r = om::cmd_predict(cfg);
      std::printf("predict: %zu + %zu candidates, %s\n", r.s2t_candidates, r.t2s_candidates,
                  om::format_hms(r.seconds).c_str());
      return om::exit_code::kSuccess;
    }
    if (*match) {
      auto r = om::cmd_match(cfg, parse_pipeline(pipeline), run_id);
      print_match(r);
      return r.report.aborted ? om::exit_code::kEndpoint : om::exit_code::kSuccess;
    }
    if (*run_all) {
      auto r = om::cmd_run_all(cfg, parse_pipeline(pipeline), run_id);
      std::printf("build-kb: %s\npredict: %s\n", om::format_hms(r.build.seconds).c_str(),
                  om::format_hms(r.predict.seconds).c_str());
      print_match(r.match);
      if (r.eval) std::cout << om::render_eval_text(*r.eval);
      return r.match.report.aborted ? om::exit_code::kEndpoint : om::exit_code::kSuccess;
    }
  } catch (const om::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", std::string(om::error_code_name(e.code())).c_str(), e.what());
    return om::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return om::exit_code::kFailure;
  }
  return om::exit_code::kFailure;
}
