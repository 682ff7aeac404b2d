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

// Bidirectional / HCB identification and the two matching pipelines:
// retrieve-identify-prompt (prioritized depth-first descent over each
// source's candidate list) and the retrieve-then-prompt baseline.

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ontomatch/alignment.hpp"
#include "ontomatch/error.hpp"
#include "ontomatch/llm.hpp"
#include "ontomatch/ontology.hpp"
#include "ontomatch/retrieval.hpp"
#include "ontomatch/text.hpp"

namespace ontomatch {

inline bool is_bidirectional(const CandidateDB& s2t, const CandidateDB& t2s, std::string_view source_id,
                             std::string_view target_id) {
  const auto& ls = s2t.list(source_id);
  const auto& lt = t2s.list(target_id);
  return ls.find(target_id) != nullptr && lt.find(source_id) != nullptr;
}

// Each entity is a top-scoring candidate of the other: the pair's score in
// L_source equals max(L_source) and its score in L_target equals
// max(L_target). Checked on rounded scores; false unless bidirectional.
inline bool is_hcb(const CandidateDB& s2t, const CandidateDB& t2s, std::string_view source_id,
                   std::string_view target_id) {
  const auto& ls = s2t.list(source_id);
  const auto& lt = t2s.list(target_id);
  const Candidate* forward = ls.find(target_id);
  const Candidate* backward = lt.find(source_id);
  if (!forward || !backward) return false;
  return forward->score == ls.max_score() && backward->score == lt.max_score();
}

enum class TraceOutcome { NotBidirectional, HcbAccept, LlmYes, LlmNo };

inline std::string_view trace_outcome_name(TraceOutcome o) {
  switch (o) {
    case TraceOutcome::NotBidirectional: return "not-bidirectional";
    case TraceOutcome::HcbAccept: return "HCB-accept";
    case TraceOutcome::LlmYes: return "LLM-yes";
    case TraceOutcome::LlmNo: return "LLM-no";
  }
  return "unknown";
}

struct TraceEvent {
  std::string source_id;
  std::size_t rank = 0;  // 1-based position in L_source
  std::string candidate_id;
  TraceOutcome outcome = TraceOutcome::NotBidirectional;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

enum class Pipeline { Mila, Baseline };

inline std::string_view pipeline_name(Pipeline p) { return p == Pipeline::Mila ? "mila" : "baseline"; }

struct MatchRunReport {
  Pipeline pipeline = Pipeline::Mila;
  Alignment alignment;
  std::size_t llm_query_count = 0;
  std::size_t hcb_count = 0;
  std::size_t unparseable_count = 0;
  std::size_t sources_total = 0;
  std::size_t sources_processed = 0;
  std::vector<TraceEvent> trace;  // grouped by source in iteration order
  std::map<std::string, double> phase_seconds;
  std::vector<std::string> multi_matched_targets;
  bool aborted = false;
  std::string error;
};

// Everything a pipeline reads. Preferred labels come from the ontologies.
struct MatchContext {
  const Ontology& source;
  const Ontology& target;
  const CandidateDB& s2t;
  const CandidateDB& t2s;
  PromptTemplate prompt_template;
};

struct MatchOptions {
  bool hcb_enabled = true;  // MILA only; off turns every bidirectional pair into an LLM query
  unsigned workers = 1;     // sources processed concurrently; each source stays sequential
};

namespace detail {

struct SourceOutcome {
  std::vector<TraceEvent> events;
  std::optional<Correspondence> match;
  std::size_t unparseable = 0;
  bool done = false;
};

inline LlmVerdict ask_pair(const MatchContext& ctx, LlmClient& llm, const std::string& s, const std::string& t) {
  LlmQuery q;
  q.prompt = render_prompt(ctx.prompt_template, ctx.source.name(), ctx.target.name(),
                           ctx.source.at(s).preferred_label, ctx.target.at(t).preferred_label);
  q.source_id = s;
  q.target_id = t;
  return llm.classify_equivalence(q);
}

inline void mila_one(const MatchContext& ctx, LlmClient& llm, const MatchOptions& opt, const std::string& s,
                     SourceOutcome& out) {
  const auto& ls = ctx.s2t.list(s);
  for (std::size_t r = 0; r < ls.candidates.size(); ++r) {
    const Candidate& c = ls.candidates[r];
    if (!is_bidirectional(ctx.s2t, ctx.t2s, s, c.id)) {
      out.events.push_back({s, r + 1, c.id, TraceOutcome::NotBidirectional});
      continue;
    }
    if (opt.hcb_enabled && is_hcb(ctx.s2t, ctx.t2s, s, c.id)) {
      out.events.push_back({s, r + 1, c.id, TraceOutcome::HcbAccept});
      out.match = Correspondence{"", s, c.id, c.score, Provenance::HCB};
      return;
    }
    LlmVerdict v = ask_pair(ctx, llm, s, c.id);
    if (v.value == Verdict::Unparseable) ++out.unparseable;
    if (v.value == Verdict::Yes) {
      out.events.push_back({s, r + 1, c.id, TraceOutcome::LlmYes});
      out.match = Correspondence{"", s, c.id, c.score, Provenance::LlmConfirmed};
      return;
    }
    out.events.push_back({s, r + 1, c.id, TraceOutcome::LlmNo});
  }
}

inline void baseline_one(const MatchContext& ctx, LlmClient& llm, const std::string& s, SourceOutcome& out) {
  const auto& ls = ctx.s2t.list(s);
  for (std::size_t r = 0; r < ls.candidates.size(); ++r) {
    const Candidate& c = ls.candidates[r];
    LlmVerdict v = ask_pair(ctx, llm, s, c.id);
    if (v.value == Verdict::Unparseable) ++out.unparseable;
    bool yes = v.value == Verdict::Yes;
    out.events.push_back({s, r + 1, c.id, yes ? TraceOutcome::LlmYes : TraceOutcome::LlmNo});
    // The list is score-descending, so the first Yes has the highest f_e.
    if (yes && !out.match) out.match = Correspondence{"", s, c.id, c.score, Provenance::BaselineLlm};
  }
}

inline MatchRunReport run_pipeline(Pipeline pipeline, const MatchContext& ctx, const std::vector<std::string>& sources,
                                   LlmClient& llm, const MatchOptions& opt) {
  if (!(ctx.s2t.params() == ctx.t2s.params())) {
    throw Error(ErrorCode::MismatchedInputs, "candidate DBs were built with different k/tau/provider");
  }
  if (ctx.s2t.direction() != Direction::SourceToTarget || ctx.t2s.direction() != Direction::TargetToSource) {
    throw Error(ErrorCode::MismatchedInputs, "candidate DB directions are swapped");
  }
  Stopwatch timer;
  std::vector<SourceOutcome> outcomes(sources.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex err_mu;
  std::string endpoint_error;
  std::exception_ptr fatal;

  auto work = [&] {
    while (!stop.load()) {
      std::size_t i = next.fetch_add(1);
      if (i >= sources.size()) return;
      try {
        if (pipeline == Pipeline::Mila) {
          mila_one(ctx, llm, opt, sources[i], outcomes[i]);
        } else {
          baseline_one(ctx, llm, sources[i], outcomes[i]);
        }
        outcomes[i].done = true;
      } catch (const Error& e) {
        std::lock_guard lock(err_mu);
        stop.store(true);
        if (e.code() == ErrorCode::EndpointUnavailable) {
          if (endpoint_error.empty()) endpoint_error = e.what();
        } else if (!fatal) {
          fatal = std::current_exception();
        }
      } catch (...) {
        std::lock_guard lock(err_mu);
        stop.store(true);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };
  unsigned workers = std::max(1u, opt.workers);
  if (workers == 1 || sources.size() <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  MatchRunReport report;
  report.pipeline = pipeline;
  report.sources_total = sources.size();
  report.alignment.source_onto = ctx.source.name();
  report.alignment.target_onto = ctx.target.name();
  report.alignment.k = ctx.s2t.params().k;
  report.alignment.tau = ctx.s2t.params().tau;
  report.alignment.provider_fingerprint = ctx.s2t.params().provider_fingerprint;
  std::map<std::string, std::size_t> target_hits;
  for (auto& o : outcomes) {
    // Partially searched sources keep their trace but only count once done.
    for (auto& ev : o.events) {
      if (ev.outcome == TraceOutcome::HcbAccept) ++report.hcb_count;
      if (ev.outcome == TraceOutcome::LlmYes || ev.outcome == TraceOutcome::LlmNo) ++report.llm_query_count;
      report.trace.push_back(std::move(ev));
    }
    report.unparseable_count += o.unparseable;
    if (o.done) ++report.sources_processed;
    if (o.match) {
      o.match->id = "c" + std::to_string(report.alignment.correspondences.size() + 1);
      ++target_hits[o.match->target_id];
      report.alignment.correspondences.push_back(std::move(*o.match));
    }
  }
  for (const auto& [t, n] : target_hits) {
    if (n > 1) report.multi_matched_targets.push_back(t);
  }
  if (!endpoint_error.empty()) {
    report.aborted = true;
    report.error = endpoint_error;
  }
  report.phase_seconds["match"] = timer.seconds();
  return report;
}

}  // namespace detail

// Source ids in the default iteration order (ascending id).
inline std::vector<std::string> default_sources(const Ontology& source) { return source.sorted_ids(); }

inline MatchRunReport match_mila(const MatchContext& ctx, const std::vector<std::string>& sources, LlmClient& llm,
                                 const MatchOptions& opt = {}) {
  return detail::run_pipeline(Pipeline::Mila, ctx, sources, llm, opt);
}

inline MatchRunReport match_baseline(const MatchContext& ctx, const std::vector<std::string>& sources,
                                     LlmClient& llm, const MatchOptions& opt = {}) {
  return detail::run_pipeline(Pipeline::Baseline, ctx, sources, llm, opt);
}

inline std::string serialize_trace(const std::vector<TraceEvent>& trace) {
  std::string out;
  for (const auto& ev : trace) {
    out += ev.source_id + "\t" + std::to_string(ev.rank) + "\t" + ev.candidate_id + "\t" +
           std::string(trace_outcome_name(ev.outcome)) + "\n";
  }
  return out;
}

inline nlohmann::json report_to_json(const MatchRunReport& r) {
  nlohmann::json phases = nlohmann::json::object();
  nlohmann::json phases_hms = nlohmann::json::object();
  for (const auto& [name, s] : r.phase_seconds) {
    phases[name] = s;
    phases_hms[name] = format_hms(s);
  }
  std::size_t by_hcb = 0, by_llm = 0;
  for (const auto& c : r.alignment.correspondences) {
    (c.provenance == Provenance::HCB ? by_hcb : by_llm) += 1;
  }
  return {{"pipeline", pipeline_name(r.pipeline)},
          {"source_onto", r.alignment.source_onto},
          {"target_onto", r.alignment.target_onto},
          {"k", r.alignment.k},
          {"tau", r.alignment.tau},
          {"provider_fingerprint", r.alignment.provider_fingerprint},
          {"llm_query_count", r.llm_query_count},
          {"hcb_count", r.hcb_count},
          {"unparseable_count", r.unparseable_count},
          {"correspondences", r.alignment.correspondences.size()},
          {"correspondences_hcb", by_hcb},
          {"correspondences_llm", by_llm},
          {"sources_total", r.sources_total},
          {"sources_processed", r.sources_processed},
          {"multi_matched_targets", r.multi_matched_targets},
          {"phase_seconds", phases},
          {"phase_hms", phases_hms},
          {"aborted", r.aborted},
          {"error", r.error}};
}

}  // namespace ontomatch
