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

// Shared helpers for the test suites: scratch directories, hand-placed
// embedding fixtures and brute-force oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ontomatch/ontomatch.hpp"

namespace ontomatch::fixtures {

class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::uint64_t counter = 0;
    auto base = std::filesystem::temp_directory_path();
    std::uint64_t salt = fnv1a64(tag + std::to_string(::getpid()) + std::to_string(counter++));
    path_ = base / ("ontomatch-" + tag + "-" + hex64(salt));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

// Builds unit vectors one at a time with exact cosines to chosen earlier
// vectors. Each new vector solves the Gram system over its constraint set
// and tops up its norm on a fresh axis, so it is orthogonal to everything
// outside the span of its constraints.
class LabelPlacer {
 public:
  explicit LabelPlacer(std::size_t dim) : dim_(dim) {}

  void place(const std::string& label, const std::vector<std::pair<std::string, double>>& cosines = {}) {
    if (next_axis_ >= dim_) throw std::logic_error("LabelPlacer: out of axes");
    const std::size_t n = cosines.size();
    std::vector<const std::vector<double>*> basis;
    for (const auto& [other, c] : cosines) basis.push_back(&vectors_.at(other));
    std::vector<double> coeff(n, 0.0);
    if (n > 0) {
      // Gauss-Jordan on [G | t]; n is tiny.
      std::vector<std::vector<double>> m(n, std::vector<double>(n + 1));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = dot(*basis[i], *basis[j]);
        m[i][n] = cosines[i].second;
      }
      for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
          if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        std::swap(m[col], m[piv]);
        if (std::abs(m[col][col]) < 1e-12) throw std::logic_error("LabelPlacer: dependent constraints for " + label);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == col) continue;
          double f = m[r][col] / m[col][col];
          for (std::size_t c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
        }
      }
      for (std::size_t i = 0; i < n; ++i) coeff[i] = m[i][n] / m[i][i];
    }
    std::vector<double> v(dim_, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < dim_; ++d) v[d] += coeff[i] * (*basis[i])[d];
    }
    double n2 = dot(v, v);
    if (n2 > 1.0) throw std::logic_error("LabelPlacer: infeasible cosines for " + label);
    v[next_axis_++] += std::sqrt(1.0 - n2);
    vectors_.emplace(label, std::move(v));
  }

  const std::vector<double>& vector(const std::string& label) const { return vectors_.at(label); }

  VectorTable table() const {
    VectorTable t;
    for (const auto& [label, v] : vectors_) t.set(label, v);
    return t;
  }

 private:
  static double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  }

  std::size_t dim_;
  std::size_t next_axis_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

// NCIT/DOID excerpt reproducing the two worked examples and the
// clear-cell-sarcoma retrieval figure. ncit:X0001 is an invented rival
// source entity that outranks ncit:C3745 in DOID:4880's candidate list.
struct SarcomaFixture {
  static constexpr std::size_t kDim = 32;

  Ontology source;
  Ontology target;
  VectorTable table;

  std::unique_ptr<DeterministicProvider> provider() const {
    return std::make_unique<DeterministicProvider>(kDim, 0, table);
  }
};

inline SarcomaFixture make_sarcoma_fixture() {
  LabelPlacer p(SarcomaFixture::kDim);
  const std::string soft = "clear cell sarcoma of soft tissue";
  const std::string not_kidney = "clear cell sarcoma - not kidney";
  const std::string rival = "clear cell sarcoma of kidney";
  p.place(soft);
  p.place(not_kidney, {{soft, 0.85}});
  p.place(rival, {{not_kidney, 0.90}, {soft, 0.60}});
  p.place("childhood kidney clear cell sarcoma", {{not_kidney, 0.95621}, {soft, 0.73}});
  p.place("kidney clear cell sarcoma", {{rival, 0.97}, {not_kidney, 0.93}, {soft, 0.74}});
  p.place("clear cell sarcoma of the kidney", {{not_kidney, 0.74}, {soft, 0.60}, {rival, 0.88}});
  p.place("ccsk");
  p.place("clear cell sarcoma", {{soft, 0.80521}, {not_kidney, 0.80}, {rival, 0.70}});
  p.place("adult soft part clear cell sarcoma", {{soft, 0.83}, {not_kidney, 0.70}, {rival, 0.50}});
  p.place("renal clear cell carcinoma", {{soft, 0.70}, {not_kidney, 0.79}, {rival, 0.72}});
  p.place("sarcoma", {{soft, 0.72}, {not_kidney, 0.77}, {rival, 0.60}});
  p.place("clear cell chondrosarcoma", {{soft, 0.76}, {not_kidney, 0.72}, {rival, 0.60}});

  const std::string autoimmune = "autoimmune nervous system disorder";
  p.place(autoimmune);
  p.place("autoimmune disease of the nervous system", {{autoimmune, 0.93}});
  p.place("autoimmune disease of central nervous system", {{autoimmune, 0.90}});
  p.place("autoimmune disease", {{autoimmune, 0.85}});
  p.place("autonomic nervous system disease", {{autoimmune, 0.80}});

  Ontology source("NCIT", {
                              make_entity("ncit:C3745", soft, {not_kidney}),
                              make_entity("ncit:C99383", autoimmune),
                              make_entity("ncit:X0001", rival),
                          });
  Ontology target("DOID", {
                              make_entity("DOID:4880", "kidney clear cell sarcoma",
                                          {"childhood kidney clear cell sarcoma", "clear cell sarcoma of the kidney",
                                           "ccsk"}),
                              make_entity("DOID:4233", "clear cell sarcoma", {"adult soft part clear cell sarcoma"}),
                              make_entity("DOID:4467", "renal clear cell carcinoma"),
                              make_entity("DOID:1115", "sarcoma"),
                              make_entity("DOID:3371", "clear cell chondrosarcoma"),
                              make_entity("DOID:438", "autoimmune disease of the nervous system"),
                              make_entity("DOID:0060004", "autoimmune disease of central nervous system"),
                              make_entity("DOID:417", "autoimmune disease"),
                              make_entity("DOID:11465", "autonomic nervous system disease"),
                          });
  return {std::move(source), std::move(target), p.table()};
}

// Overrides for every label: a cluster centre plus Gaussian spread, so that
// cosines cover the whole [0, 1] range. A fraction of labels copies the
// previous label's vector exactly to force score ties.
inline VectorTable clustered_fixture(const std::vector<const Ontology*>& ontologies, std::size_t dim,
                                     std::uint64_t seed, std::size_t clusters = 6, double spread = 0.35,
                                     double tie_rate = 0.1) {
  SplitMixRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::vector<double>> centres(clusters, std::vector<double>(dim));
  for (auto& c : centres) {
    for (auto& x : c) x = rng.normal();
  }
  VectorTable t;
  std::vector<double> last;
  for (const Ontology* o : ontologies) {
    for (const auto& e : o->entities()) {
      for (const auto& l : e.labels()) {
        if (t.find(l)) continue;
        std::vector<double> v;
        if (!last.empty() && rng.uniform() < tie_rate) {
          v = last;
        } else {
          const auto& c = centres[rng.below(clusters)];
          v.resize(dim);
          for (std::size_t d = 0; d < dim; ++d) v[d] = c[d] + spread * rng.normal();
        }
        t.set(l, v);
        last = v;
      }
    }
  }
  return t;
}

// ---- brute-force oracles -------------------------------------------------

struct OracleHit {
  std::string label;
  double score;
};

// All labels scored, full sort, then cut. Shares only the cosine and
// rounding primitives with the engine.
inline std::vector<OracleHit> oracle_top_k(const std::vector<double>& q,
                                           const std::vector<std::pair<std::string, std::vector<double>>>& rows,
                                           std::size_t k, double tau) {
  std::vector<OracleHit> all;
  for (const auto& [label, v] : rows) {
    double s = round_score(cosine_similarity(std::span<const double>(q), std::span<const double>(v)));
    if (s >= tau) all.push_back({label, s});
  }
  std::sort(all.begin(), all.end(), [](const OracleHit& a, const OracleHit& b) {
    return a.score != b.score ? a.score > b.score : a.label < b.label;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

inline std::vector<std::pair<std::string, std::vector<double>>> oracle_rows(const Ontology& o, EmbeddingProvider& p) {
  std::set<std::string> labels;
  for (const auto& e : o.entities()) {
    for (const auto& l : e.labels()) labels.insert(l);
  }
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  for (const auto& l : labels) {
    auto ev = p.encode(l);
    auto v = ev.values();
    rows.emplace_back(l, std::vector<double>(v.begin(), v.end()));
  }
  return rows;
}

// Candidate DB text for one direction computed from scratch, in the
// engine's file format.
inline std::string oracle_candidate_db(const Ontology& query, const Ontology& opposite, EmbeddingProvider& p,
                                       std::size_t k, double tau, Direction dir) {
  auto rows = oracle_rows(opposite, p);
  std::string out = "# candidate-db\tdirection=" + std::string(direction_name(dir)) + "\tk=" + std::to_string(k) +
                    "\ttau=" + format_double(tau) + "\tprovider=" + p.fingerprint() + "\n";
  std::vector<std::string> ids;
  for (const auto& e : query.entities()) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  for (const auto& id : ids) {
    std::map<std::string, double> hit_labels;
    for (const auto& l : query.at(id).labels()) {
      auto ev = p.encode(l);
      auto v = ev.values();
      for (const auto& h : oracle_top_k(std::vector<double>(v.begin(), v.end()), rows, k, tau)) {
        auto [it, fresh] = hit_labels.emplace(h.label, h.score);
        if (!fresh) it->second = std::max(it->second, h.score);
      }
    }
    std::vector<std::pair<std::string, double>> cands;
    for (const auto& e : opposite.entities()) {
      double best = -1.0;
      for (const auto& l : e.labels()) {
        auto it = hit_labels.find(l);
        if (it != hit_labels.end()) best = std::max(best, it->second);
      }
      if (best >= 0.0) cands.emplace_back(e.id, best);
    }
    std::sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    for (const auto& [cid, s] : cands) out += id + "\t" + cid + "\t" + format_score(s) + "\n";
  }
  return out;
}

// First candidate in rank order that is bidirectional and in the
// reference; empty when none.
inline std::string oracle_first_positive(const CandidateList& forward, const CandidateDB& backward,
                                         const ReferenceAlignment& reference) {
  for (const auto& c : forward.candidates) {
    bool back = false;
    for (const auto& b : backward.list(c.id).candidates) {
      if (b.id == forward.owner) back = true;
    }
    if (back && reference.contains(forward.owner, c.id)) return c.id;
  }
  return {};
}

inline Ontology random_ontology(const std::string& name, const std::string& prefix, std::size_t n,
                                std::uint64_t seed, double synonym_rate = 0.3) {
  SplitMixRng rng(seed);
  std::set<std::string> used;
  std::vector<Entity> entities;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> syns;
    while (rng.uniform() < synonym_rate) syns.push_back(detail::unique_phrase(rng, used));
    entities.push_back(make_entity(prefix + std::to_string(i), detail::unique_phrase(rng, used), syns));
  }
  return Ontology(name, std::move(entities));
}

}  // namespace ontomatch::fixtures
