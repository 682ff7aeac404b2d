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

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "support/fixtures.hpp"

#ifndef ONTOMATCH_CLI
#error "ONTOMATCH_CLI must name the command-line binary"
#endif
#ifndef ONTOMATCH_TEST_DATA
#error "ONTOMATCH_TEST_DATA must point at tests/data"
#endif

using namespace ontomatch;

namespace {

int run_cli(const std::string& args, const std::filesystem::path& log) {
  std::string cmd = std::string(ONTOMATCH_CLI) + " " + args + " > '" + log.string() + "' 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Sarcoma fixture written to disk with a matching config.
struct SarcomaWorkspace {
  fixtures::TempDir dir{"ws"};
  fixtures::SarcomaFixture fx = fixtures::make_sarcoma_fixture();
  RunConfig cfg;

  SarcomaWorkspace() {
    write_ontology_dump(fx.source, dir / "ncit.tsv");
    write_ontology_dump(fx.target, dir / "doid.tsv");
    write_file_atomic(dir / "fixture.vec", fx.table.serialize());
    write_file_atomic(dir / "reference.tsv",
                      "ncit:C3745\tDOID:4233\nncit:C99383\tDOID:438\nncit:X0001\tDOID:4880\n");
    write_file_atomic(dir / "run.conf",
                      "# sarcoma fixture\n"
                      "source.path = ncit.tsv\nsource.name = NCIT\n"
                      "target.path = doid.tsv\ntarget.name = DOID\n"
                      "embedding.kind = deterministic-test\n"
                      "embedding.dim = " + std::to_string(fixtures::SarcomaFixture::kDim) + "\n"
                      "embedding.fixture = fixture.vec\n"
                      "llm.kind = oracle\nllm.reference = reference.tsv\n"
                      "eval.reference = reference.tsv\n"
                      "out = out\n");
    cfg = load_config(dir / "run.conf");
  }
};

}  // namespace

TEST(Config, DefaultsSerializeExactly) {
  RunConfig cfg;
  auto snap = cfg.snapshot();
  EXPECT_NE(snap.find("\nk = 5\n"), std::string::npos);
  EXPECT_NE(snap.find("\ntau = 0.75\n"), std::string::npos);
  EXPECT_NE(snap.find("\nrounding_decimals = 5\n"), std::string::npos);
  EXPECT_NE(snap.find("\nllm.temperature = 0.7\n"), std::string::npos);
  RunConfig back;
  apply_config_text(back, snap);
  EXPECT_EQ(back.snapshot(), snap);
}

TEST(Config, ValidationAndUnknownKeys) {
  RunConfig cfg;
  EXPECT_THROW(cfg.set("no.such.key", "1"), Error);
  EXPECT_THROW(cfg.set("k", "five"), Error);
  cfg.set("k", "0");
  EXPECT_THROW(cfg.validate(), Error);
  cfg.set("k", "3");
  cfg.set("tau", "1.2");
  EXPECT_THROW(cfg.validate(), Error);
  cfg.set("tau", "0.9");
  cfg.set("rounding_decimals", "3");
  EXPECT_THROW(cfg.validate(), Error);
  cfg.set("rounding_decimals", "5");
  cfg.validate();
  cfg.set("llm.kind", "telepathy");
  try {
    cfg.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(exit_code_for(e.code()), exit_code::kConfig);
  }
  RunConfig bad;
  EXPECT_THROW(apply_config_text(bad, "k 5\n"), Error);
}

TEST(Config, RelativePathsResolveAgainstConfigFile) {
  fixtures::TempDir dir("cfg");
  std::filesystem::create_directories(dir / "sub");
  write_file_atomic(dir / "sub" / "a.conf", "source.path = data/s.tsv\nout = /abs/out\n");
  auto cfg = load_config(dir / "sub" / "a.conf");
  EXPECT_EQ(cfg.source_path, dir / "sub" / "data" / "s.tsv");
  EXPECT_EQ(cfg.out, "/abs/out");
  EXPECT_THROW(load_config(dir / "missing.conf"), Error);
}

TEST(Config, SecretsComeFromNamedEnvironmentVariable) {
  ::setenv("ONTOMATCH_TEST_LLM_TOKEN", "hunter2", 1);
  RunConfig cfg;
  cfg.set("llm.kind", "http-chat");
  cfg.set("llm.url", "http://127.0.0.1:9/v1/chat/completions");
  cfg.set("llm.token_env", "ONTOMATCH_TEST_LLM_TOKEN");
  auto client = make_llm_client(cfg);
  EXPECT_EQ(client->kind(), LlmKind::HttpChat);
  EXPECT_EQ(cfg.snapshot().find("hunter2"), std::string::npos);
  EXPECT_NE(cfg.snapshot().find("ONTOMATCH_TEST_LLM_TOKEN"), std::string::npos);
}

TEST(Commands, BuildKbWritesBothKbsAndIsIdempotent) {
  SarcomaWorkspace ws;
  auto r = cmd_build_kb(ws.cfg);
  OutputLayout out{ws.cfg.out};
  ASSERT_TRUE(std::filesystem::exists(out.source_kb()));
  ASSERT_TRUE(std::filesystem::exists(out.target_kb()));
  auto s = load_vector_kb(out.source_kb());
  auto t = load_vector_kb(out.target_kb());
  EXPECT_EQ(s.dim(), t.dim());
  EXPECT_EQ(s.dim(), r.dim);
  EXPECT_EQ(r.source_labels, 4u);
  EXPECT_EQ(r.target_labels, 13u);
  std::string first_s = read_file(out.source_kb()), first_t = read_file(out.target_kb());
  cmd_build_kb(ws.cfg);
  EXPECT_EQ(read_file(out.source_kb()), first_s);
  EXPECT_EQ(read_file(out.target_kb()), first_t);
  EXPECT_TRUE(std::filesystem::exists(out.kb_timing()));
}

TEST(Commands, PredictIsIdempotentAndDetectsStaleKb) {
  SarcomaWorkspace ws;
  OutputLayout out{ws.cfg.out};
  EXPECT_THROW(cmd_predict(ws.cfg), Error);  // no KBs yet
  cmd_build_kb(ws.cfg);
  cmd_predict(ws.cfg);
  std::string s2t = read_file(out.s2t()), t2s = read_file(out.t2s());
  cmd_predict(ws.cfg);
  EXPECT_EQ(read_file(out.s2t()), s2t);
  EXPECT_EQ(read_file(out.t2s()), t2s);

  RunConfig changed = ws.cfg;
  changed.embedding_seed = 99;
  try {
    cmd_predict(changed);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StaleKB);
  }
  RunConfig other_k = ws.cfg;
  other_k.k = 3;
  try {
    cmd_match(other_k, Pipeline::Mila, "stale");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StaleKB);
  }
}

TEST(Commands, MatchMissingDatabases) {
  SarcomaWorkspace ws;
  try {
    cmd_match(ws.cfg, Pipeline::Mila, "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InputNotFound);
    EXPECT_NE(std::string(e.what()).find("run predict first"), std::string::npos);
  }
}

TEST(Commands, MatchAgainstGoldenAlignment) {
  SarcomaWorkspace ws;
  cmd_build_kb(ws.cfg);
  cmd_predict(ws.cfg);
  auto r = cmd_match(ws.cfg, Pipeline::Mila, "golden");
  std::string golden = read_file(std::filesystem::path(ONTOMATCH_TEST_DATA) / "golden" / "sarcoma_mila_alignment.tsv");
  golden.replace(golden.find("{fingerprint}"), 13, ws.fx.provider()->fingerprint());
  EXPECT_EQ(read_file(r.run_dir / "alignment.tsv"), golden);
  for (const char* f : {"trace.tsv", "report.json", "exchanges.jsonl", "config.snapshot"}) {
    EXPECT_TRUE(std::filesystem::exists(r.run_dir / f)) << f;
  }
  EXPECT_EQ(r.report.llm_query_count, 2u);  // C3745: No for DOID:4880, Yes for DOID:4233
  EXPECT_EQ(read_file(r.run_dir / "config.snapshot"), ws.cfg.snapshot());
  auto report = nlohmann::json::parse(read_file(r.run_dir / "report.json"));
  EXPECT_EQ(report["pipeline"], "mila");
  EXPECT_TRUE(report["phase_seconds"].contains("build_kb"));
  EXPECT_TRUE(report["phase_seconds"].contains("predict"));
}

TEST(Commands, BaselineAuditAndCompare) {
  SarcomaWorkspace ws;
  cmd_build_kb(ws.cfg);
  cmd_predict(ws.cfg);
  auto m = cmd_match(ws.cfg, Pipeline::Mila, "m");
  auto b = cmd_match(ws.cfg, Pipeline::Baseline, "b");
  OutputLayout out{ws.cfg.out};
  auto ids = ws.fx.source.sorted_ids();
  auto s2t = load_candidate_db(out.s2t(), &ids);
  EXPECT_EQ(b.report.llm_query_count, s2t.total_candidates());
  std::ifstream trace(b.run_dir / "trace.tsv");
  std::size_t lines = 0;
  for (std::string l; std::getline(trace, l);) ++lines;
  EXPECT_EQ(lines, s2t.total_candidates());

  auto c = cmd_compare(b.run_dir, m.run_dir, ws.dir / "reference.tsv");
  EXPECT_EQ(c.mila.pipeline, "mila");
  EXPECT_EQ(c.rows[4].metric, "llm_queries");
  EXPECT_EQ(c.rows[4].mila, 2.0);
  EXPECT_EQ(c.rows[4].baseline, static_cast<double>(s2t.total_candidates()));
  EXPECT_THROW(cmd_compare(m.run_dir, m.run_dir, ws.dir / "reference.tsv"), Error);
}

TEST(Commands, VarianceOverRepeatedRuns) {
  SarcomaWorkspace ws;
  cmd_build_kb(ws.cfg);
  cmd_predict(ws.cfg);
  auto r1 = cmd_match(ws.cfg, Pipeline::Mila, "r1");
  auto r2 = cmd_match(ws.cfg, Pipeline::Mila, "r2");
  auto st = cmd_variance({r1.run_dir, r2.run_dir}, ws.dir / "reference.tsv");
  EXPECT_EQ(st.runs, 2u);
  EXPECT_EQ(st.metrics[2].metric, "f_measure");
  EXPECT_EQ(st.metrics[2].variance, 0.0);
  auto b = cmd_match(ws.cfg, Pipeline::Baseline, "b");
  EXPECT_THROW(cmd_variance({r1.run_dir, b.run_dir}, ws.dir / "reference.tsv"), Error);
}

TEST(Commands, RunAllEqualsSeparateSteps) {
  SarcomaWorkspace ws;
  auto all = cmd_run_all(ws.cfg, Pipeline::Mila, "all");
  ASSERT_TRUE(all.eval);
  EXPECT_EQ(all.eval->f_measure, 1.0);
  EXPECT_TRUE(std::filesystem::exists(all.match.run_dir / "eval.json"));

  SarcomaWorkspace separate;
  cmd_build_kb(separate.cfg);
  cmd_predict(separate.cfg);
  auto m = cmd_match(separate.cfg, Pipeline::Mila, "all");
  auto ev = cmd_eval(m.run_dir / "alignment.tsv", separate.dir / "reference.tsv");
  EXPECT_EQ(read_file(all.match.run_dir / "alignment.tsv"), read_file(m.run_dir / "alignment.tsv"));
  EXPECT_EQ(read_file(all.match.run_dir / "trace.tsv"), read_file(m.run_dir / "trace.tsv"));
  EXPECT_EQ(eval_to_json(*all.eval), eval_to_json(ev));
}

TEST(Commands, GenSyntheticWritesUsableConfig) {
  fixtures::TempDir dir("gen");
  SyntheticParams p;
  p.n_entities = 10;
  p.hcb_fraction = 1.0;
  p.seed = 4;
  cmd_gen_synthetic(p, dir.path());
  auto cfg = load_config(dir / "synthetic.conf");
  auto r = cmd_run_all(cfg, Pipeline::Mila, "h1");
  EXPECT_EQ(r.match.report.llm_query_count, 0u);
  EXPECT_EQ(r.eval->f_measure, 1.0);
}

TEST(Cli, ExitCodes) {
  SarcomaWorkspace ws;
  const std::string conf = (ws.dir / "run.conf").string();
  auto log = ws.dir / "cli.log";
  EXPECT_EQ(run_cli("--config " + conf + " match --pipeline mila --run-id early", log), exit_code::kInput);
  EXPECT_NE(read_file(log).find("run predict first"), std::string::npos);
  EXPECT_EQ(run_cli("--config " + conf + " build-kb", log), exit_code::kSuccess);
  EXPECT_NE(read_file(log).find("00:00:0"), std::string::npos);
  EXPECT_EQ(run_cli("--config " + conf + " predict", log), exit_code::kSuccess);
  EXPECT_EQ(run_cli("--config " + conf + " match --pipeline mila --run-id m", log), exit_code::kSuccess);
  EXPECT_EQ(run_cli("--config " + conf + " match --pipeline baseline --run-id b", log), exit_code::kSuccess);
  const std::string out = (ws.dir / "out" / "runs").string();
  const std::string ref = (ws.dir / "reference.tsv").string();
  EXPECT_EQ(run_cli("eval --alignment " + out + "/m/alignment.tsv --reference " + ref, log), exit_code::kSuccess);
  EXPECT_NE(read_file(log).find("f_measure\t1.000"), std::string::npos);
  EXPECT_EQ(run_cli("compare " + out + "/m " + out + "/b --reference " + ref + " --tsv " + out + "/cmp.tsv", log),
            exit_code::kSuccess);
  EXPECT_NE(read_file(log).find("llm_queries"), std::string::npos);

  // Config errors: bad flag value, unknown verb, unknown key, tau out of range.
  EXPECT_EQ(run_cli("--config " + conf + " --tau 2 predict", log), exit_code::kConfig);
  EXPECT_EQ(run_cli("frobnicate", log), exit_code::kConfig);
  EXPECT_EQ(run_cli("--config " + conf + " --set nope=1 predict", log), exit_code::kConfig);
  EXPECT_EQ(run_cli("--config " + conf + " --k 3 match --run-id k3", log), exit_code::kConfig);

  // Parse errors.
  write_file_atomic(ws.dir / "broken.tsv", "ncit:C1\n");
  EXPECT_EQ(run_cli("--config " + conf + " --set source.path=" + (ws.dir / "broken.tsv").string() + " build-kb", log),
            exit_code::kInput);
  write_file_atomic(ws.dir / "broken_alignment.tsv", "no header\n");
  EXPECT_EQ(run_cli("eval --alignment " + (ws.dir / "broken_alignment.tsv").string() + " --reference " + ref, log),
            exit_code::kInput);

  // Endpoint failure: nothing listens on port 9.
  EXPECT_EQ(run_cli("--config " + conf +
                        " --set llm.kind=http-chat --set llm.url=http://127.0.0.1:9/v1/chat/completions"
                        " match --pipeline mila --run-id down",
                    log),
            exit_code::kEndpoint);
  auto report = nlohmann::json::parse(read_file(ws.dir / "out" / "runs" / "down" / "report.json"));
  EXPECT_TRUE(report["aborted"].get<bool>());
}

TEST(Cli, GenSyntheticThenRunAll) {
  fixtures::TempDir dir("cli-gen");
  auto log = dir / "log";
  EXPECT_EQ(run_cli("--seed 3 gen-synthetic --n 30 --hcb-fraction 0.8 --dir " + dir.path().string(), log), 0);
  EXPECT_EQ(run_cli("--config " + (dir / "synthetic.conf").string() + " run-all --pipeline mila --run-id r", log), 0);
  EXPECT_NE(read_file(log).find("f_measure\t1.000"), std::string::npos);
}
