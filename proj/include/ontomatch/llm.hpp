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

// The yes/no equivalence classifier: prompt rendering, reply parsing and
// the client kinds (HTTP chat endpoint, reference oracle, scripted replies).

#include <atomic>
#include <chrono>
#include <cctype>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <ostream>
#include <semaphore>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ontomatch/alignment.hpp"
#include "ontomatch/error.hpp"
#include "ontomatch/http.hpp"
#include "ontomatch/text.hpp"

namespace ontomatch {

inline constexpr std::string_view kPlaceholderSrcOnto = "{src_onto_name}";
inline constexpr std::string_view kPlaceholderTgtOnto = "{tgt_onto_name}";
inline constexpr std::string_view kPlaceholderSource = "{source_entity}";
inline constexpr std::string_view kPlaceholderTarget = "{target_entity}";

inline constexpr std::string_view kDefaultPromptTemplate =
    "You are a helpful expert in ontology matching, which involves determining equivalence "
    "correspondences between concepts from different ontologies. The source ontology is called "
    "{src_onto_name} and the target ontology is called {tgt_onto_name}.\n"
    "\n"
    "Classify whether the following concepts are equivalent:\n"
    "\n"
    "Source concept: {source_entity}\n"
    "\n"
    "Target concept: {target_entity}\n"
    "\n"
    "If so, answer 'Yes', without adding any type of explanation. Otherwise, answer 'No'.";

class PromptTemplate {
 public:
  PromptTemplate() : PromptTemplate(std::string(kDefaultPromptTemplate)) {}

  // Each of the four placeholders must occur exactly once.
  explicit PromptTemplate(std::string text) : text_(std::move(text)) {
    for (auto ph : {kPlaceholderSrcOnto, kPlaceholderTgtOnto, kPlaceholderSource, kPlaceholderTarget}) {
      auto first = text_.find(ph);
      if (first == std::string::npos) throw Error(ErrorCode::MissingPlaceholder, std::string(ph));
      if (text_.find(ph, first + 1) != std::string::npos) {
        throw Error(ErrorCode::MissingPlaceholder, std::string(ph) + " occurs more than once");
      }
    }
  }

  static PromptTemplate from_file(const std::filesystem::path& path) { return PromptTemplate(read_file(path)); }

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

inline std::string render_prompt(const PromptTemplate& t, std::string_view src_onto, std::string_view tgt_onto,
                                 std::string_view src_label, std::string_view tgt_label) {
  if (src_onto.empty() || tgt_onto.empty() || src_label.empty() || tgt_label.empty()) {
    throw Error(ErrorCode::InvalidParameter, "prompt arguments must be nonempty");
  }
  // Substitute left to right in a single pass so a label that happens to
  // contain placeholder text is never expanded again.
  const std::pair<std::string_view, std::string_view> subs[] = {
      {kPlaceholderSrcOnto, src_onto},
      {kPlaceholderTgtOnto, tgt_onto},
      {kPlaceholderSource, src_label},
      {kPlaceholderTarget, tgt_label}};
  const std::string& text = t.text();
  std::string out;
  out.reserve(text.size() + src_label.size() + tgt_label.size() + 32);
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t best = std::string::npos;
    const std::pair<std::string_view, std::string_view>* hit = nullptr;
    for (const auto& s : subs) {
      auto p = text.find(s.first, pos);
      if (p < best) {
        best = p;
        hit = &s;
      }
    }
    if (!hit) {
      out.append(text, pos, std::string::npos);
      break;
    }
    out.append(text, pos, best - pos);
    out.append(hit->second);
    pos = best + hit->first.size();
  }
  return out;
}

enum class Verdict { Yes, No, Unparseable };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "Yes";
    case Verdict::No: return "No";
    case Verdict::Unparseable: return "Unparseable";
  }
  return "Unparseable";
}

// First whitespace-delimited token, case-folded, punctuation removed.
inline Verdict parse_verdict(std::string_view reply) {
  reply = trim(reply);
  std::size_t end = 0;
  while (end < reply.size() && !is_space(reply[end])) ++end;
  std::string token;
  for (char c : reply.substr(0, end)) {
    auto uc = static_cast<unsigned char>(c);
    if (std::ispunct(uc)) continue;
    token.push_back(static_cast<char>(std::tolower(uc)));
  }
  if (token == "yes") return Verdict::Yes;
  if (token == "no") return Verdict::No;
  return Verdict::Unparseable;
}

struct LlmVerdict {
  Verdict value = Verdict::Unparseable;
  std::string raw;
  double latency_s = 0.0;
  int attempts = 0;
};

struct LlmQuery {
  std::string prompt;
  std::string source_id;
  std::string target_id;
};

// Appends one JSON object per exchange; safe to share between threads.
class ExchangeLog {
 public:
  ExchangeLog() = default;
  explicit ExchangeLog(const std::filesystem::path& path) : file_(path, std::ios::app) {
    if (!file_) throw Error(ErrorCode::PersistFailure, "cannot open exchange log " + path.string());
    out_ = &file_;
  }
  explicit ExchangeLog(std::ostream& out) : out_(&out) {}

  void record(const LlmQuery& q, const LlmVerdict& v) {
    nlohmann::json line = {{"source_id", q.source_id}, {"target_id", q.target_id}, {"prompt", q.prompt},
                           {"reply", v.raw},           {"verdict", verdict_name(v.value)},
                           {"latency_s", v.latency_s}, {"attempts", v.attempts}};
    std::lock_guard lock(mu_);
    ++count_;
    if (out_) {
      *out_ << line.dump() << '\n';
      out_->flush();
    }
  }

  std::size_t count() const {
    std::lock_guard lock(mu_);
    return count_;
  }

 private:
  mutable std::mutex mu_;
  std::ofstream file_;
  std::ostream* out_ = nullptr;
  std::size_t count_ = 0;
};

enum class LlmKind { HttpChat, Oracle, Scripted };

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual LlmKind kind() const = 0;

  // Every call counts as one request, whatever the reply.
  LlmVerdict classify_equivalence(const LlmQuery& q) {
    ++requests_;
    Stopwatch timer;
    LlmVerdict v = ask(q);
    v.latency_s = timer.seconds();
    if (log_) log_->record(q, v);
    return v;
  }

  std::size_t request_count() const { return requests_.load(); }
  void set_log(ExchangeLog* log) { log_ = log; }

 protected:
  // Fills raw, value and attempts.
  virtual LlmVerdict ask(const LlmQuery& q) = 0;

 private:
  std::atomic<std::size_t> requests_{0};
  ExchangeLog* log_ = nullptr;
};

// Answers from reference membership. With flip_probability > 0 a verdict is
// inverted when a hash of (seed, pair) falls under the probability, so the
// outcome for a pair depends on nothing but the pair and the seed.
class OracleClient final : public LlmClient {
 public:
  OracleClient(ReferenceAlignment reference, double flip_probability = 0.0, std::uint64_t seed = 0)
      : reference_(std::move(reference)), flip_(flip_probability), seed_(seed) {
    if (!(flip_ >= 0.0 && flip_ <= 1.0)) throw Error(ErrorCode::InvalidParameter, "flip probability must lie in [0, 1]");
  }

  LlmKind kind() const override { return LlmKind::Oracle; }
  double flip_probability() const { return flip_; }

  bool flips(const std::string& s, const std::string& t) const {
    if (flip_ <= 0.0) return false;
    std::uint64_t state = fnv1a64(t, fnv1a64("\x1f", fnv1a64(s))) ^ (seed_ * 0x9E3779B97F4A7C15ULL);
    double u = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    return u < flip_;
  }

 protected:
  LlmVerdict ask(const LlmQuery& q) override {
    bool yes = reference_.contains(q.source_id, q.target_id);
    if (flips(q.source_id, q.target_id)) yes = !yes;
    LlmVerdict v;
    v.value = yes ? Verdict::Yes : Verdict::No;
    v.raw = yes ? "Yes" : "No";
    v.attempts = 1;
    return v;
  }

 private:
  ReferenceAlignment reference_;
  double flip_;
  std::uint64_t seed_;
};

inline std::unique_ptr<OracleClient> make_oracle(const ReferenceAlignment& reference, double flip_probability = 0.0,
                                                 std::uint64_t seed = 0) {
  return std::make_unique<OracleClient>(reference, flip_probability, seed);
}

// Replays canned replies in call order; once exhausted every call gets
// `fallback`.
class ScriptedClient final : public LlmClient {
 public:
  explicit ScriptedClient(std::vector<std::string> replies, std::string fallback = "No")
      : replies_(replies.begin(), replies.end()), fallback_(std::move(fallback)) {}

  LlmKind kind() const override { return LlmKind::Scripted; }

 protected:
  LlmVerdict ask(const LlmQuery&) override {
    std::string reply;
    {
      std::lock_guard lock(mu_);
      if (replies_.empty()) {
        reply = fallback_;
      } else {
        reply = std::move(replies_.front());
        replies_.pop_front();
      }
    }
    LlmVerdict v;
    v.value = parse_verdict(reply);
    v.raw = std::move(reply);
    v.attempts = 1;
    return v;
  }

 private:
  std::mutex mu_;
  std::deque<std::string> replies_;
  std::string fallback_;
};

struct HttpChatSettings {
  std::string url;  // full chat-completions URL
  std::string model;
  double temperature = 0.7;
  std::size_t max_concurrency = 4;
  int retries = 3;
  double backoff_s = 0.5;  // doubled on each retry
  double timeout_s = 120.0;
  std::string token;  // resolved bearer token, never persisted
};

// Chat-completion style endpoint: one user message per request, reply text
// taken from choices[0].message.content.
class HttpChatClient final : public LlmClient {
 public:
  explicit HttpChatClient(HttpChatSettings s)
      : settings_(std::move(s)),
        endpoint_(http::parse_endpoint(settings_.url)),
        slots_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(settings_.max_concurrency, 1))) {}

  LlmKind kind() const override { return LlmKind::HttpChat; }
  const HttpChatSettings& settings() const { return settings_; }

 protected:
  LlmVerdict ask(const LlmQuery& q) override {
    nlohmann::json body = {{"model", settings_.model},
                           {"temperature", settings_.temperature},
                           {"messages", nlohmann::json::array({{{"role", "user"}, {"content", q.prompt}}})}};
    const std::string payload = body.dump();
    std::string last_error = "no attempt made";
    double delay = settings_.backoff_s;
    LlmVerdict v;
    for (int attempt = 0; attempt <= settings_.retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        delay *= 2;
      }
      v.attempts = attempt + 1;
      std::optional<http::Response> res;
      {
        slots_.acquire();
        struct Release {
          std::counting_semaphore<>& s;
          ~Release() { s.release(); }
        } release{slots_};
        res = http::post_json(endpoint_, payload, settings_.token, settings_.timeout_s);
      }
      if (!res) {
        last_error = "transport failure";
        continue;
      }
      if (res->status >= 500 || res->status == 429) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        throw Error(ErrorCode::EndpointUnavailable, settings_.url + " answered HTTP " + std::to_string(res->status));
      }
      v.raw = extract_reply(res->body);
      v.value = parse_verdict(v.raw);
      return v;
    }
    throw Error(ErrorCode::EndpointUnavailable, settings_.url + ": " + last_error + " after " +
                                                    std::to_string(settings_.retries) + " retries");
  }

 private:
  // A malformed body is kept as the raw reply and parses as Unparseable.
  static std::string extract_reply(const std::string& body) {
    auto doc = nlohmann::json::parse(body, nullptr, false);
    if (doc.is_discarded()) return body;
    try {
      return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      return body;
    }
  }

  HttpChatSettings settings_;
  http::Endpoint endpoint_;
  std::counting_semaphore<> slots_;
};

}  // namespace ontomatch
