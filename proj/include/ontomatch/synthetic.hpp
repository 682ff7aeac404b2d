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

// Synthetic ontology pairs with a known 1:1 reference and an embedding
// fixture table that pins every label vector.
//
// Pairs are dealt into small groups. Inside a group every source/target
// score is at least 0.80 (so the whole group is retrieved at tau = 0.75),
// and scores outside a group are near zero. With M = 0.8 + 0.2 * G:
//
//   HCB pair:      G = 0.20 on its own pair (0.84), the row and column max.
//   non-HCB pair:  G = 0.10 on its own pair (0.82) and G = 0.15 (0.83)
//                  towards a decoy, the target of an HCB pair in the same
//                  group. The decoy outranks the reference target, yet the
//                  decoy's own top source is its HCB partner (0.84).
//   background:    G = 0 (0.80).
//
// A group that would hold non-HCB pairs but no HCB pair receives an extra
// anchor pair (not in the reference) to serve as decoy, since wherever
// candidates exist the globally best-scoring pair is always an HCB pair.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ontomatch/alignment.hpp"
#include "ontomatch/embedding.hpp"
#include "ontomatch/error.hpp"
#include "ontomatch/ontology.hpp"
#include "ontomatch/text.hpp"

namespace ontomatch {

struct SyntheticParams {
  std::size_t n_entities = 100;
  double synonym_rate = 0.0;
  double noise = 0.0;
  double hcb_fraction = 0.8;
  std::uint64_t seed = 0;
  std::size_t group_size = 5;
  std::size_t dim = 128;
};

struct SyntheticCorpus {
  Ontology source;
  Ontology target;
  ReferenceAlignment reference;
  VectorTable fixture;
  std::set<std::pair<std::string, std::string>> hcb_pairs;  // reference pairs built as HCB
  std::set<std::pair<std::string, std::string>> anchor_pairs;
};

// Portable generator: identical streams on every platform and standard
// library for a given seed.
class SplitMixRng {
 public:
  explicit SplitMixRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() { return splitmix64(state_); }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
  double normal() {
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::uint64_t state_;
};

namespace detail {

inline std::string pseudo_phrase(SplitMixRng& rng) {
  static const char* kSyllables[] = {"ba", "ke", "lo", "mi", "nu", "ra", "si", "to", "ve", "za", "dor", "fen",
                                     "gal", "hum", "jik", "lar", "mon", "pel", "quo", "rin", "sul", "tam", "vex",
                                     "wyn", "cor", "dra", "ela", "ost", "ith", "umb"};
  constexpr std::size_t kCount = sizeof(kSyllables) / sizeof(kSyllables[0]);
  std::size_t words = 2 + rng.below(2);
  std::string out;
  for (std::size_t w = 0; w < words; ++w) {
    if (w) out += ' ';
    std::size_t syl = 2 + rng.below(2);
    for (std::size_t s = 0; s < syl; ++s) out += kSyllables[rng.below(kCount)];
  }
  return out;
}

inline std::string unique_phrase(SplitMixRng& rng, std::set<std::string>& used) {
  std::string p = pseudo_phrase(rng);
  while (!used.insert(p).second) p = pseudo_phrase(rng) + " " + pseudo_phrase(rng);
  return p;
}

// `count` orthonormal vectors in R^dim (modified Gram-Schmidt, two passes).
inline std::vector<std::vector<double>> random_orthonormal(SplitMixRng& rng, std::size_t count, std::size_t dim) {
  std::vector<std::vector<double>> basis;
  basis.reserve(count);
  while (basis.size() < count) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.normal();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        double d = detail::dot(v.data(), b.data(), dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] -= d * b[i];
      }
    }
    double n = detail::norm(v.data(), dim);
    if (n < 1e-6) continue;
    for (auto& x : v) x /= n;
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::string padded(std::size_t v, int width) {
  std::string s = std::to_string(v);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

}  // namespace detail

inline SyntheticCorpus generate_synthetic(const SyntheticParams& p) {
  if (p.n_entities == 0) throw Error(ErrorCode::InvalidParameter, "n_entities must be positive");
  if (!(p.hcb_fraction >= 0.0 && p.hcb_fraction <= 1.0)) throw Error(ErrorCode::InvalidParameter, "hcb fraction must lie in [0, 1]");
  if (!(p.synonym_rate >= 0.0 && p.synonym_rate <= 1.0)) throw Error(ErrorCode::InvalidParameter, "synonym rate must lie in [0, 1]");
  if (!(p.noise >= 0.0) || !std::isfinite(p.noise)) throw Error(ErrorCode::InvalidParameter, "noise must be >= 0");
  if (p.group_size < 1) throw Error(ErrorCode::InvalidParameter, "group size must be >= 1");
  if (2 * (p.group_size + 1) + 1 > p.dim) throw Error(ErrorCode::InvalidParameter, "dim too small for group size");

  SplitMixRng rng(p.seed ^ 0x5EEDF00DULL);
  const std::size_t n = p.n_entities;
  const auto n_hcb = static_cast<std::size_t>(std::llround(p.hcb_fraction * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  std::vector<std::size_t> target_number(n);
  for (std::size_t i = 0; i < n; ++i) target_number[i] = i;
  rng.shuffle(target_number);

  struct Member {
    std::string src_id, tgt_id;
    bool hcb = false;
    bool anchor = false;
  };
  const std::size_t groups = (n + p.group_size - 1) / p.group_size;
  std::vector<std::vector<Member>> grouped(groups);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t pair = order[j];
    Member m;
    m.src_id = "SRC:" + detail::padded(pair, 6);
    m.tgt_id = "TGT:" + detail::padded(target_number[pair], 6);
    m.hcb = j < n_hcb;
    grouped[j % groups].push_back(std::move(m));
  }
  std::size_t anchors = 0;
  for (auto& g : grouped) {
    bool has_hcb = std::any_of(g.begin(), g.end(), [](const Member& m) { return m.hcb; });
    if (!has_hcb) {
      Member a;
      a.src_id = "SRC:A" + detail::padded(anchors, 5);
      a.tgt_id = "TGT:A" + detail::padded(anchors, 5);
      a.hcb = true;
      a.anchor = true;
      ++anchors;
      g.push_back(std::move(a));
    }
  }

  std::set<std::string> used;
  std::vector<Entity> src_entities, tgt_entities;
  ReferenceAlignment reference;
  std::set<std::pair<std::string, std::string>> hcb_pairs, anchor_pairs;
  VectorTable fixture;
  const std::size_t dim = p.dim;
  const double center_w = std::sqrt(0.8), local_w = std::sqrt(0.2);

  auto emit = [&](const std::string& id, const std::vector<double>& base, std::vector<Entity>& out) {
    std::vector<std::string> labels{detail::unique_phrase(rng, used)};
    if (p.synonym_rate > 0 && rng.uniform() < p.synonym_rate) labels.push_back(detail::unique_phrase(rng, used));
    for (const auto& l : labels) {
      std::vector<double> v = base;
      if (p.noise > 0) {
        const double scale = p.noise / std::sqrt(static_cast<double>(dim));
        for (auto& x : v) x += scale * rng.normal();
        double nv = detail::norm(v.data(), dim);
        for (auto& x : v) x /= nv;
      }
      fixture.set(l, std::move(v));
    }
    std::vector<std::string> syn(labels.begin() + 1, labels.end());
    out.push_back(make_entity(id, labels.front(), syn));
  };

  for (auto& g : grouped) {
    const std::size_t m = g.size();
    auto frame = detail::random_orthonormal(rng, 2 * m + 1, dim);
    const auto& center = frame[0];
    // Inner products between the local source directions u_x (frame[1+x])
    // and target directions w_y.
    std::vector<std::vector<double>> inner(m, std::vector<double>(m, 0.0));
    std::vector<std::size_t> hcb_members;
    for (std::size_t x = 0; x < m; ++x) {
      if (g[x].hcb) hcb_members.push_back(x);
    }
    std::size_t rr = 0;
    for (std::size_t x = 0; x < m; ++x) {
      if (g[x].hcb) {
        inner[x][x] = 0.20;
      } else {
        inner[x][x] = 0.10;
        inner[x][hcb_members[rr++ % hcb_members.size()]] = 0.15;
      }
    }
    for (std::size_t x = 0; x < m; ++x) {
      std::vector<double> s(dim);
      for (std::size_t i = 0; i < dim; ++i) s[i] = center_w * center[i] + local_w * frame[1 + x][i];
      emit(g[x].src_id, s, src_entities);
    }
    for (std::size_t y = 0; y < m; ++y) {
      std::vector<double> w(dim, 0.0);
      double sq = 0.0;
      for (std::size_t x = 0; x < m; ++x) {
        if (inner[x][y] == 0.0) continue;
        sq += inner[x][y] * inner[x][y];
        for (std::size_t i = 0; i < dim; ++i) w[i] += inner[x][y] * frame[1 + x][i];
      }
      const double resid = std::sqrt(std::max(0.0, 1.0 - sq));
      for (std::size_t i = 0; i < dim; ++i) w[i] += resid * frame[1 + m + y][i];
      std::vector<double> t(dim);
      for (std::size_t i = 0; i < dim; ++i) t[i] = center_w * center[i] + local_w * w[i];
      emit(g[y].tgt_id, t, tgt_entities);
    }
    for (const auto& mem : g) {
      if (mem.anchor) {
        anchor_pairs.emplace(mem.src_id, mem.tgt_id);
        continue;
      }
      reference.pairs.emplace(mem.src_id, mem.tgt_id);
      if (mem.hcb) hcb_pairs.emplace(mem.src_id, mem.tgt_id);
    }
  }

  auto by_id = [](const Entity& a, const Entity& b) { return a.id < b.id; };
  std::sort(src_entities.begin(), src_entities.end(), by_id);
  std::sort(tgt_entities.begin(), tgt_entities.end(), by_id);
  return SyntheticCorpus{Ontology("SYNTH-SRC", std::move(src_entities)),
                         Ontology("SYNTH-TGT", std::move(tgt_entities)),
                         std::move(reference),
                         std::move(fixture),
                         std::move(hcb_pairs),
                         std::move(anchor_pairs)};
}

// Plain label-only pair of the requested size, for throughput runs with the
// hash-based embedder (no fixture, no designed structure).
inline std::pair<Ontology, Ontology> generate_label_pair(std::size_t labels_per_side, std::uint64_t seed) {
  if (labels_per_side == 0) throw Error(ErrorCode::InvalidParameter, "labels_per_side must be positive");
  SplitMixRng rng(seed);
  std::set<std::string> used;
  auto side = [&](const std::string& prefix, const std::string& name) {
    std::vector<Entity> es;
    es.reserve(labels_per_side);
    for (std::size_t i = 0; i < labels_per_side; ++i) {
      es.push_back(make_entity(prefix + detail::padded(i, 7), detail::unique_phrase(rng, used)));
    }
    return Ontology(name, std::move(es));
  };
  Ontology src = side("S:", "SCALE-SRC");
  Ontology tgt = side("T:", "SCALE-TGT");
  return {std::move(src), std::move(tgt)};
}

inline void write_synthetic(const SyntheticCorpus& c, const std::filesystem::path& dir) {
  write_ontology_dump(c.source, dir / "source.tsv");
  write_ontology_dump(c.target, dir / "target.tsv");
  write_reference(c.reference, dir / "reference.tsv");
  write_file_atomic(dir / "fixture.vec", c.fixture.serialize());
}

}  // namespace ontomatch
