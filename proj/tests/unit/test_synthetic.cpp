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

#include <gtest/gtest.h>

#include "support/fixtures.hpp"

using namespace ontomatch;

namespace {

struct CorpusRun {
  SyntheticCorpus corpus;
  CandidateDbPair dbs;
  explicit CorpusRun(const SyntheticParams& params) : corpus(generate_synthetic(params)) {
    DeterministicProvider p(params.dim, 0, corpus.fixture);
    dbs = build_candidate_db(corpus.source, corpus.target, p, 5, 0.75, 1);
  }
  MatchContext ctx() const { return {corpus.source, corpus.target, dbs.source_to_target, dbs.target_to_source, {}}; }
};

SyntheticParams params(std::size_t n, double h, std::uint64_t seed) {
  SyntheticParams p;
  p.n_entities = n;
  p.hcb_fraction = h;
  p.seed = seed;
  return p;
}

}  // namespace

TEST(Synthetic, SameSeedSameCorpus) {
  fixtures::TempDir a("syn-a"), b("syn-b");
  auto p = params(40, 0.6, 77);
  p.synonym_rate = 0.3;
  p.noise = 0.05;
  write_synthetic(generate_synthetic(p), a.path());
  write_synthetic(generate_synthetic(p), b.path());
  for (const char* f : {"source.tsv", "target.tsv", "reference.tsv", "fixture.vec"}) {
    EXPECT_EQ(read_file(a / f), read_file(b / f)) << f;
  }
  p.seed = 78;
  fixtures::TempDir c("syn-c");
  write_synthetic(generate_synthetic(p), c.path());
  EXPECT_NE(read_file(a / "source.tsv"), read_file(c / "source.tsv"));
}

TEST(Synthetic, ReferenceIsOneToOne) {
  auto c = generate_synthetic(params(100, 0.8, 5));
  EXPECT_EQ(c.reference.size(), 100u);
  std::set<std::string> sources, targets;
  for (const auto& [s, t] : c.reference.pairs) {
    EXPECT_TRUE(sources.insert(s).second);
    EXPECT_TRUE(targets.insert(t).second);
    EXPECT_TRUE(c.source.find(s));
    EXPECT_TRUE(c.target.find(t));
  }
  EXPECT_EQ(c.hcb_pairs.size(), 80u);
}

TEST(Synthetic, ConstructionGuarantees) {
  for (double h : {0.0, 0.3, 0.8, 1.0}) {
    CorpusRun run(params(60, h, 9));
    const auto& s2t = run.dbs.source_to_target;
    const auto& t2s = run.dbs.target_to_source;
    for (const auto& [s, t] : run.corpus.reference.pairs) {
      ASSERT_TRUE(is_bidirectional(s2t, t2s, s, t)) << s << " " << t << " h=" << h;
      bool built_hcb = run.corpus.hcb_pairs.count({s, t}) > 0;
      EXPECT_EQ(is_hcb(s2t, t2s, s, t), built_hcb) << s << " h=" << h;
      if (!built_hcb) {
        EXPECT_GE(s2t.list(s).candidates.size(), 2u);
        EXPECT_NE(s2t.list(s).candidates.front().id, t);
      }
    }
    for (const auto& [s, t] : run.corpus.anchor_pairs) {
      EXPECT_FALSE(run.corpus.reference.contains(s, t));
      EXPECT_TRUE(is_hcb(s2t, t2s, s, t));
    }
  }
}

TEST(Synthetic, AllHcbNeedsNoQueries) {
  CorpusRun run(params(10, 1.0, 3));
  auto llm = make_oracle(run.corpus.reference);
  auto rep = match_mila(run.ctx(), default_sources(run.corpus.source), *llm);
  EXPECT_EQ(rep.llm_query_count, 0u);
  EXPECT_EQ(evaluate(rep.alignment, run.corpus.reference).f_measure, 1.0);
}

TEST(Synthetic, NoHcbReferencePairs) {
  CorpusRun run(params(10, 0.0, 3));
  EXPECT_TRUE(run.corpus.hcb_pairs.empty());
  for (const auto& [s, t] : run.corpus.reference.pairs) {
    EXPECT_FALSE(is_hcb(run.dbs.source_to_target, run.dbs.target_to_source, s, t));
  }
  auto llm = make_oracle(run.corpus.reference);
  auto rep = match_mila(run.ctx(), default_sources(run.corpus.source), *llm);
  // Only the unreferenced anchor pairs are HCB.
  EXPECT_EQ(rep.hcb_count, run.corpus.anchor_pairs.size());
  for (const auto& c : rep.alignment.correspondences) {
    if (c.provenance == Provenance::HCB) {
      EXPECT_FALSE(run.corpus.reference.contains(c.source_id, c.target_id));
    }
  }
  auto ev = evaluate(rep.alignment, run.corpus.reference);
  EXPECT_EQ(ev.recall, 1.0);
}

TEST(Synthetic, SynonymsAndNoiseKeepReferenceRetrievable) {
  auto p = params(80, 0.5, 21);
  p.synonym_rate = 0.5;
  p.noise = 0.02;
  CorpusRun run(p);
  std::size_t with_syn = 0;
  for (const auto& e : run.corpus.source.entities()) with_syn += !e.synonyms.empty();
  EXPECT_GT(with_syn, 10u);
  for (const auto& [s, t] : run.corpus.reference.pairs) {
    EXPECT_TRUE(run.dbs.source_to_target.list(s).find(t)) << s;
  }
}

TEST(Synthetic, InvalidParameters) {
  EXPECT_THROW(generate_synthetic(params(10, 1.5, 0)), Error);
  EXPECT_THROW(generate_synthetic(params(0, 0.5, 0)), Error);
  auto p = params(10, 0.5, 0);
  p.synonym_rate = -0.1;
  EXPECT_THROW(generate_synthetic(p), Error);
}

TEST(Synthetic, LabelPairHasRequestedSize) {
  auto [s, t] = generate_label_pair(500, 1);
  EXPECT_EQ(s.label_count(), 500u);
  EXPECT_EQ(t.label_count(), 500u);
  EXPECT_EQ(build_entity_term_index(s).term_count(), 500u);
}
