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

// Run configuration: one `key = value` file plus command-line overrides.
// Secrets never live in the file; `*.token_env` names the environment
// variable that holds them.

#include <cstdint>
#include <type_traits>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ontomatch/alignment.hpp"
#include "ontomatch/embedding.hpp"
#include "ontomatch/error.hpp"
#include "ontomatch/http.hpp"
#include "ontomatch/llm.hpp"
#include "ontomatch/text.hpp"

namespace ontomatch {

struct RunConfig {
  std::filesystem::path source_path;
  std::string source_name = "source";
  std::filesystem::path target_path;
  std::string target_name = "target";

  std::string embedding_kind = "deterministic-test";
  std::size_t embedding_dim = 128;
  std::uint64_t embedding_seed = 0;
  std::filesystem::path embedding_fixture;  // deterministic-test overrides
  std::filesystem::path embedding_file;     // precomputed-file vectors
  std::string embedding_url;
  std::string embedding_model;
  std::string embedding_token_env;
  std::size_t embedding_batch_size = 64;

  std::size_t k = 5;
  double tau = 0.75;
  int rounding_decimals = kScoreDecimals;

  std::string llm_kind = "oracle";
  std::string llm_url;
  std::string llm_model;
  double llm_temperature = 0.7;
  std::size_t llm_max_concurrency = 4;
  std::string llm_token_env;
  std::filesystem::path llm_reference;  // oracle kind
  double llm_flip_probability = 0.0;
  std::filesystem::path llm_script;  // scripted kind: one reply per line

  std::filesystem::path prompt_template;  // empty: built-in template

  std::filesystem::path eval_reference;
  std::string eval_split = "full";

  std::filesystem::path out = "out";
  std::uint64_t seed = 0;
  unsigned workers = 0;        // candidate DB build; 0 = hardware concurrency
  unsigned match_workers = 1;  // sources matched concurrently

  void set(std::string_view key, std::string_view value, const std::filesystem::path& base_dir = {});
  void validate() const;
  std::string snapshot() const;
};

namespace detail {

inline std::filesystem::path resolve_path(std::string_view v, const std::filesystem::path& base) {
  std::filesystem::path p{std::string(v)};
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

template <typename T>
T config_number(std::string_view key, std::string_view v) {
  T out{};
  bool ok;
  if constexpr (std::is_floating_point_v<T>) {
    ok = parse_double(v, out);
  } else {
    ok = parse_int(v, out);
  }
  if (!ok) throw Error(ErrorCode::ConfigError, std::string(key) + ": not a number: '" + std::string(v) + "'");
  return out;
}

}  // namespace detail

inline void RunConfig::set(std::string_view key, std::string_view raw, const std::filesystem::path& base) {
  using detail::config_number;
  using detail::resolve_path;
  std::string_view v = trim(raw);
  std::string s(v);
  if (key == "source.path") source_path = resolve_path(v, base);
  else if (key == "source.name") source_name = s;
  else if (key == "target.path") target_path = resolve_path(v, base);
  else if (key == "target.name") target_name = s;
  else if (key == "embedding.kind") embedding_kind = s;
  else if (key == "embedding.dim") embedding_dim = config_number<std::size_t>(key, v);
  else if (key == "embedding.seed") embedding_seed = config_number<std::uint64_t>(key, v);
  else if (key == "embedding.fixture") embedding_fixture = resolve_path(v, base);
  else if (key == "embedding.file") embedding_file = resolve_path(v, base);
  else if (key == "embedding.url") embedding_url = s;
  else if (key == "embedding.model") embedding_model = s;
  else if (key == "embedding.token_env") embedding_token_env = s;
  else if (key == "embedding.batch_size") embedding_batch_size = config_number<std::size_t>(key, v);
  else if (key == "k") k = config_number<std::size_t>(key, v);
  else if (key == "tau") tau = config_number<double>(key, v);
  else if (key == "rounding_decimals") rounding_decimals = config_number<int>(key, v);
  else if (key == "llm.kind") llm_kind = s;
  else if (key == "llm.url") llm_url = s;
  else if (key == "llm.model") llm_model = s;
  else if (key == "llm.temperature") llm_temperature = config_number<double>(key, v);
  else if (key == "llm.max_concurrency") llm_max_concurrency = config_number<std::size_t>(key, v);
  else if (key == "llm.token_env") llm_token_env = s;
  else if (key == "llm.reference") llm_reference = resolve_path(v, base);
  else if (key == "llm.flip_probability") llm_flip_probability = config_number<double>(key, v);
  else if (key == "llm.script") llm_script = resolve_path(v, base);
  else if (key == "prompt.template") prompt_template = resolve_path(v, base);
  else if (key == "eval.reference") eval_reference = resolve_path(v, base);
  else if (key == "eval.split") eval_split = s;
  else if (key == "out") out = resolve_path(v, base);
  else if (key == "seed") seed = config_number<std::uint64_t>(key, v);
  else if (key == "workers") workers = config_number<unsigned>(key, v);
  else if (key == "match.workers") match_workers = config_number<unsigned>(key, v);
  else throw Error(ErrorCode::ConfigError, "unknown key '" + std::string(key) + "'");
}

inline void RunConfig::validate() const {
  if (k < 1) throw Error(ErrorCode::ConfigError, "k must be >= 1");
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::ConfigError, "tau must lie in [0, 1]");
  if (rounding_decimals != kScoreDecimals) {
    throw Error(ErrorCode::ConfigError, "scores are always rounded to " + std::to_string(kScoreDecimals) + " decimals");
  }
  if (embedding_kind != "deterministic-test" && embedding_kind != "precomputed-file" &&
      embedding_kind != "http-service") {
    throw Error(ErrorCode::ConfigError, "unknown embedding.kind '" + embedding_kind + "'");
  }
  if (llm_kind != "oracle" && llm_kind != "scripted" && llm_kind != "http-chat") {
    throw Error(ErrorCode::ConfigError, "unknown llm.kind '" + llm_kind + "'");
  }
  if (!(llm_flip_probability >= 0.0 && llm_flip_probability <= 1.0)) {
    throw Error(ErrorCode::ConfigError, "llm.flip_probability must lie in [0, 1]");
  }
  if (eval_split != "full" && eval_split != "train" && eval_split != "test") {
    throw Error(ErrorCode::ConfigError, "eval.split must be full, train or test");
  }
}

// Every setting in file syntax; secrets appear only as variable names.
inline std::string RunConfig::snapshot() const {
  std::string out_s;
  auto line = [&](std::string_view key, const std::string& value) {
    out_s += std::string(key) + " = " + value + "\n";
  };
  line("source.path", source_path.string());
  line("source.name", source_name);
  line("target.path", target_path.string());
  line("target.name", target_name);
  line("embedding.kind", embedding_kind);
  line("embedding.dim", std::to_string(embedding_dim));
  line("embedding.seed", std::to_string(embedding_seed));
  line("embedding.fixture", embedding_fixture.string());
  line("embedding.file", embedding_file.string());
  line("embedding.url", embedding_url);
  line("embedding.model", embedding_model);
  line("embedding.token_env", embedding_token_env);
  line("embedding.batch_size", std::to_string(embedding_batch_size));
  line("k", std::to_string(k));
  line("tau", format_double(tau));
  line("rounding_decimals", std::to_string(rounding_decimals));
  line("llm.kind", llm_kind);
  line("llm.url", llm_url);
  line("llm.model", llm_model);
  line("llm.temperature", format_double(llm_temperature));
  line("llm.max_concurrency", std::to_string(llm_max_concurrency));
  line("llm.token_env", llm_token_env);
  line("llm.reference", llm_reference.string());
  line("llm.flip_probability", format_double(llm_flip_probability));
  line("llm.script", llm_script.string());
  line("prompt.template", prompt_template.string());
  line("eval.reference", eval_reference.string());
  line("eval.split", eval_split);
  line("out", out.string());
  line("seed", std::to_string(seed));
  line("workers", std::to_string(workers));
  line("match.workers", std::to_string(match_workers));
  return out_s;
}

// Parses `key = value` lines; '#' starts a comment line. Relative paths are
// resolved against `base_dir`.
inline void apply_config_text(RunConfig& cfg, std::string_view text, const std::filesystem::path& base_dir = {}) {
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = trim(strip_cr(raw));
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1), base_dir);
  }
}

inline RunConfig load_config(const std::filesystem::path& path) {
  RunConfig cfg;
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error&) {
    throw Error(ErrorCode::ConfigError, "cannot read config " + path.string());
  }
  apply_config_text(cfg, text, path.parent_path());
  return cfg;
}

inline std::unique_ptr<EmbeddingProvider> make_provider(const RunConfig& cfg) {
  if (cfg.embedding_kind == "deterministic-test") {
    VectorTable overrides;
    if (!cfg.embedding_fixture.empty()) overrides = load_vector_table(cfg.embedding_fixture);
    return std::make_unique<DeterministicProvider>(cfg.embedding_dim, cfg.embedding_seed, std::move(overrides));
  }
  if (cfg.embedding_kind == "precomputed-file") {
    if (cfg.embedding_file.empty()) throw Error(ErrorCode::ConfigError, "embedding.file is required for precomputed-file");
    return std::make_unique<PrecomputedProvider>(load_vector_table(cfg.embedding_file), cfg.embedding_file.string());
  }
  if (cfg.embedding_kind == "http-service") {
    if (cfg.embedding_url.empty()) throw Error(ErrorCode::ConfigError, "embedding.url is required for http-service");
    HttpEmbeddingSettings s;
    s.url = cfg.embedding_url;
    s.model = cfg.embedding_model;
    s.dim = cfg.embedding_dim;
    s.batch_size = cfg.embedding_batch_size;
    s.token = http::token_from_env(cfg.embedding_token_env);
    return std::make_unique<HttpEmbeddingProvider>(s);
  }
  throw Error(ErrorCode::ConfigError, "unknown embedding.kind '" + cfg.embedding_kind + "'");
}

inline std::vector<std::string> load_script(const std::filesystem::path& path) {
  std::vector<std::string> replies;
  std::string text = read_file(path);
  for (auto line : split(text, '\n')) {
    line = strip_cr(line);
    if (!line.empty()) replies.emplace_back(line);
  }
  return replies;
}

inline std::unique_ptr<LlmClient> make_llm_client(const RunConfig& cfg) {
  if (cfg.llm_kind == "oracle") {
    if (cfg.llm_reference.empty()) throw Error(ErrorCode::ConfigError, "llm.reference is required for the oracle client");
    return make_oracle(load_reference(cfg.llm_reference), cfg.llm_flip_probability, cfg.seed);
  }
  if (cfg.llm_kind == "scripted") {
    if (cfg.llm_script.empty()) throw Error(ErrorCode::ConfigError, "llm.script is required for the scripted client");
    return std::make_unique<ScriptedClient>(load_script(cfg.llm_script));
  }
  if (cfg.llm_kind == "http-chat") {
    if (cfg.llm_url.empty()) throw Error(ErrorCode::ConfigError, "llm.url is required for http-chat");
    HttpChatSettings s;
    s.url = cfg.llm_url;
    s.model = cfg.llm_model;
    s.temperature = cfg.llm_temperature;
    s.max_concurrency = cfg.llm_max_concurrency;
    s.token = http::token_from_env(cfg.llm_token_env);
    return std::make_unique<HttpChatClient>(s);
  }
  throw Error(ErrorCode::ConfigError, "unknown llm.kind '" + cfg.llm_kind + "'");
}

inline PromptTemplate make_prompt_template(const RunConfig& cfg) {
  if (cfg.prompt_template.empty()) return PromptTemplate();
  return PromptTemplate::from_file(cfg.prompt_template);
}

}  // namespace ontomatch
