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

// Label embeddings: the vector type, cosine similarity, score rounding and
// the pluggable providers (deterministic test embedder, precomputed vector
// file, HTTP embedding service).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ontomatch/error.hpp"
#include "ontomatch/http.hpp"
#include "ontomatch/text.hpp"

namespace ontomatch {

inline constexpr int kScoreDecimals = 5;

class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidParameter, "embedding component is not finite");
    }
  }

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> values_;
};

namespace detail {

// Four interleaved partial sums; the accumulation order is fixed so every
// caller gets bit-identical results for the same inputs.
inline double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

inline double norm(const double* a, std::size_t n) { return std::sqrt(dot(a, a, n)); }

// Raw cosine given precomputed norms (both nonzero).
inline double cosine_with_norms(const double* a, const double* b, std::size_t n, double na,
                                double nb) {
  double c = dot(a, b, n) / (na * nb);
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace detail

inline double vector_norm(std::span<const double> v) { return detail::norm(v.data(), v.size()); }

inline double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(u.size()) + " vs " + std::to_string(v.size()));
  }
  double nu = vector_norm(u), nv = vector_norm(v);
  if (nu == 0.0 || nv == 0.0) throw Error(ErrorCode::ZeroVector, "cosine of an all-zero vector");
  return detail::cosine_with_norms(u.data(), v.data(), u.size(), nu, nv);
}

inline double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
  return cosine_similarity(u.values(), v.values());
}

// Rounds to five decimals, ties away from zero.
inline double round_score(double s) {
  constexpr double scale = 100000.0;
  double r = std::round(s * scale) / scale;
  return r + 0.0;  // folds -0.0 into 0.0
}

// label -> vector table, the on-disk form of precomputed vectors and of the
// deterministic provider's fixture overrides.
//
//   label <TAB> comma-separated floats
class VectorTable {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  void set(const std::string& label, std::vector<double> values) {
    if (values.empty()) throw Error(ErrorCode::DimensionMismatch, "empty vector for '" + label + "'");
    if (dim_ == 0) dim_ = values.size();
    if (values.size() != dim_) {
      throw Error(ErrorCode::DimensionMismatch, "vector for '" + label + "' has dim " +
                                                    std::to_string(values.size()) + ", expected " +
                                                    std::to_string(dim_));
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw Error(ErrorCode::MalformedRecord, "non-finite component for '" + label + "'");
    }
    rows_[label] = std::move(values);
  }

  const std::vector<double>* find(const std::string& label) const {
    auto it = rows_.find(label);
    return it == rows_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, std::vector<double>>& rows() const { return rows_; }

  std::string serialize() const {
    std::string out;
    for (const auto& [label, values] : rows_) {
      out += label;
      out += '\t';
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
      }
      out += '\n';
    }
    return out;
  }

  std::uint64_t content_hash() const { return fnv1a64(serialize()); }

 private:
  std::size_t dim_ = 0;
  std::map<std::string, std::vector<double>> rows_;
};

inline VectorTable parse_vector_table(std::istream& in) {
  VectorTable table;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (trim(line).empty() || line.front() == '#') continue;
    auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": expected label<TAB>floats");
    }
    std::string label = normalize_label(line.substr(0, tab));
    std::vector<double> values;
    for (auto f : split(line.substr(tab + 1), ',')) {
      double v;
      if (!parse_double(f, v)) {
        throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": bad float '" + std::string(f) + "'");
      }
      values.push_back(v);
    }
    if (label.empty()) throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": empty label");
    table.set(label, std::move(values));
  }
  return table;
}

inline VectorTable load_vector_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputNotFound, "cannot open vector file " + path.string());
  return parse_vector_table(in);
}

enum class ProviderKind { DeterministicTest, HttpService, PrecomputedFile };

inline std::string_view provider_kind_name(ProviderKind k) {
  switch (k) {
    case ProviderKind::DeterministicTest: return "deterministic-test";
    case ProviderKind::HttpService: return "http-service";
    case ProviderKind::PrecomputedFile: return "precomputed-file";
  }
  return "unknown";
}

// Base class for all providers. Owns the label cache: a label is encoded at
// most once per provider instance, and encode_labels is safe to call from
// several threads.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual ProviderKind kind() const = 0;
  virtual std::size_t dim() const = 0;
  // Identifies the provider configuration; persisted with every artifact
  // derived from its vectors.
  virtual std::string fingerprint() const = 0;

  std::vector<EmbeddingVector> encode_labels(const std::vector<std::string>& labels) {
    if (labels.empty()) throw Error(ErrorCode::InvalidParameter, "no labels to encode");
    std::vector<std::string> misses;
    {
      std::shared_lock lock(mu_);
      std::unordered_set<std::string_view> queued;
      for (const auto& l : labels) {
        if (l.empty()) throw Error(ErrorCode::InvalidParameter, "empty label");
        if (!cache_.count(l) && queued.insert(l).second) misses.push_back(l);
      }
    }
    if (!misses.empty()) {
      auto fresh = encode_uncached(misses);
      if (fresh.size() != misses.size()) {
        throw Error(ErrorCode::ProviderUnavailable, "provider returned " + std::to_string(fresh.size()) +
                                                        " vectors for " + std::to_string(misses.size()) + " labels");
      }
      for (const auto& v : fresh) {
        if (v.dim() != dim()) {
          throw Error(ErrorCode::DimensionMismatch, "provider returned dim " + std::to_string(v.dim()) +
                                                        ", advertised " + std::to_string(dim()));
        }
      }
      std::unique_lock lock(mu_);
      for (std::size_t i = 0; i < misses.size(); ++i) cache_.try_emplace(misses[i], std::move(fresh[i]));
    }
    std::vector<EmbeddingVector> out;
    out.reserve(labels.size());
    std::shared_lock lock(mu_);
    for (const auto& l : labels) out.push_back(cache_.at(l));
    return out;
  }

  EmbeddingVector encode(const std::string& label) { return encode_labels({label}).front(); }

  std::size_t cached_count() const {
    std::shared_lock lock(mu_);
    return cache_.size();
  }

  // Number of labels that actually went through encode_uncached.
  std::size_t encoded_count() const { return encoded_.load(); }

 protected:
  virtual std::vector<EmbeddingVector> encode_batch(const std::vector<std::string>& labels) = 0;

 private:
  std::vector<EmbeddingVector> encode_uncached(const std::vector<std::string>& labels) {
    encoded_ += labels.size();
    return encode_batch(labels);
  }

  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, EmbeddingVector> cache_;
  std::atomic<std::size_t> encoded_{0};
};

// Pseudo-random unit-scale vectors expanded from a hash of the label text.
// Pure across processes; individual labels can be pinned through an
// override table so fixtures get designed similarity orderings.
class DeterministicProvider final : public EmbeddingProvider {
 public:
  explicit DeterministicProvider(std::size_t dim, std::uint64_t seed = 0, VectorTable overrides = {})
      : dim_(dim), seed_(seed), overrides_(std::move(overrides)) {
    if (dim_ == 0) throw Error(ErrorCode::InvalidParameter, "embedding dim must be positive");
    if (!overrides_.empty() && overrides_.dim() != dim_) {
      throw Error(ErrorCode::DimensionMismatch, "fixture table has dim " + std::to_string(overrides_.dim()) +
                                                    ", provider dim is " + std::to_string(dim_));
    }
  }

  ProviderKind kind() const override { return ProviderKind::DeterministicTest; }
  std::size_t dim() const override { return dim_; }
  std::string fingerprint() const override {
    return "deterministic-test:dim=" + std::to_string(dim_) + ":seed=" + std::to_string(seed_) +
           ":overrides=" + (overrides_.empty() ? std::string("none") : hex64(overrides_.content_hash()));
  }

  static std::vector<double> hash_vector(std::string_view text, std::size_t dim, std::uint64_t seed) {
    std::uint64_t state = fnv1a64(text) ^ (seed * 0xD1B54A32D192ED03ULL);
    std::vector<double> v(dim);
    for (auto& x : v) {
      double unit = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
      x = 2.0 * unit - 1.0;
    }
    return v;
  }

 protected:
  std::vector<EmbeddingVector> encode_batch(const std::vector<std::string>& labels) override {
    std::vector<EmbeddingVector> out;
    out.reserve(labels.size());
    for (const auto& l : labels) {
      if (const auto* fixed = overrides_.find(l)) {
        out.emplace_back(*fixed);
      } else {
        out.emplace_back(hash_vector(l, dim_, seed_));
      }
    }
    return out;
  }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  VectorTable overrides_;
};

class PrecomputedProvider final : public EmbeddingProvider {
 public:
  explicit PrecomputedProvider(VectorTable table, std::string source = "inline")
      : table_(std::move(table)), source_(std::move(source)) {
    if (table_.empty()) throw Error(ErrorCode::InvalidParameter, "precomputed vector table is empty");
  }

  ProviderKind kind() const override { return ProviderKind::PrecomputedFile; }
  std::size_t dim() const override { return table_.dim(); }
  std::string fingerprint() const override {
    return "precomputed-file:dim=" + std::to_string(table_.dim()) + ":hash=" + hex64(table_.content_hash());
  }

 protected:
  std::vector<EmbeddingVector> encode_batch(const std::vector<std::string>& labels) override {
    std::vector<EmbeddingVector> out;
    out.reserve(labels.size());
    for (const auto& l : labels) {
      const auto* v = table_.find(l);
      if (!v) throw Error(ErrorCode::MissingVector, l);
      out.emplace_back(*v);
    }
    return out;
  }

 private:
  VectorTable table_;
  std::string source_;
};

struct HttpEmbeddingSettings {
  std::string url;  // full endpoint URL
  std::string model;
  std::size_t dim = 0;
  std::size_t batch_size = 64;
  int retries = 3;
  double backoff_s = 0.2;  // first retry delay, doubled on each retry
  double timeout_s = 30.0;
  std::string token;  // resolved bearer token, never persisted
};

// Posts {"input": [...], "model": ...} and accepts either
// {"embeddings": [[...], ...]} or {"data": [{"embedding": [...]}, ...]}.
class HttpEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(HttpEmbeddingSettings s)
      : settings_(std::move(s)), endpoint_(http::parse_endpoint(settings_.url)) {
    if (settings_.dim == 0) throw Error(ErrorCode::ConfigError, "http embedding provider needs a dim");
    if (settings_.batch_size == 0) settings_.batch_size = 1;
  }

  ProviderKind kind() const override { return ProviderKind::HttpService; }
  std::size_t dim() const override { return settings_.dim; }
  std::string fingerprint() const override {
    return "http-service:dim=" + std::to_string(settings_.dim) + ":model=" + settings_.model +
           ":url=" + settings_.url;
  }

  std::size_t request_count() const { return requests_.load(); }

 protected:
  std::vector<EmbeddingVector> encode_batch(const std::vector<std::string>& labels) override {
    std::vector<EmbeddingVector> out;
    out.reserve(labels.size());
    for (std::size_t start = 0; start < labels.size(); start += settings_.batch_size) {
      std::size_t end = std::min(labels.size(), start + settings_.batch_size);
      std::vector<std::string> batch(labels.begin() + static_cast<std::ptrdiff_t>(start),
                                     labels.begin() + static_cast<std::ptrdiff_t>(end));
      auto vectors = post_batch(batch);
      for (auto& v : vectors) out.push_back(std::move(v));
    }
    return out;
  }

 private:
  std::vector<EmbeddingVector> post_batch(const std::vector<std::string>& batch) {
    nlohmann::json body = {{"input", batch}};
    if (!settings_.model.empty()) body["model"] = settings_.model;
    const std::string payload = body.dump();
    std::string last_error = "no attempt made";
    double delay = settings_.backoff_s;
    for (int attempt = 0; attempt <= settings_.retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        delay *= 2;
      }
      ++requests_;
      auto res = http::post_json(endpoint_, payload, settings_.token, settings_.timeout_s);
      if (!res) {
        last_error = "transport failure";
        continue;
      }
      if (res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw Error(ErrorCode::ProviderUnavailable, "embedding service answered HTTP " + std::to_string(res->status));
      }
      return parse_response(res->body, batch.size());
    }
    throw Error(ErrorCode::ProviderUnavailable, settings_.url + ": " + last_error + " after " +
                                                    std::to_string(settings_.retries) + " retries");
  }

  std::vector<EmbeddingVector> parse_response(const std::string& text, std::size_t expected) const {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::ProviderUnavailable, "embedding service returned invalid JSON");
    std::vector<std::vector<double>> rows;
    try {
      if (doc.contains("embeddings")) {
        rows = doc.at("embeddings").get<std::vector<std::vector<double>>>();
      } else if (doc.contains("data")) {
        for (const auto& item : doc.at("data")) rows.push_back(item.at("embedding").get<std::vector<double>>());
      } else {
        throw Error(ErrorCode::ProviderUnavailable, "embedding response has neither 'embeddings' nor 'data'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ProviderUnavailable, std::string("bad embedding response: ") + e.what());
    }
    if (rows.size() != expected) {
      throw Error(ErrorCode::ProviderUnavailable, "expected " + std::to_string(expected) + " vectors, got " +
                                                      std::to_string(rows.size()));
    }
    std::vector<EmbeddingVector> out;
    out.reserve(rows.size());
    for (auto& r : rows) {
      if (r.size() != settings_.dim) {
        throw Error(ErrorCode::DimensionMismatch, "service returned dim " + std::to_string(r.size()) +
                                                      ", configured " + std::to_string(settings_.dim));
      }
      out.emplace_back(std::move(r));
    }
    return out;
  }

  HttpEmbeddingSettings settings_;
  http::Endpoint endpoint_;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace ontomatch
