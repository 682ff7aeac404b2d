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

// Correspondences, alignments and reference alignments, with their
// line-oriented file formats.
//
// Alignment file:
//   # source_onto <TAB> target_onto <TAB> k <TAB> tau <TAB> provider_fingerprint
//   source_id <TAB> target_id <TAB> equivalence <TAB> confidence <TAB> provenance
//
// Reference file:
//   source_id <TAB> target_id [<TAB> full|train|test]

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ontomatch/error.hpp"
#include "ontomatch/text.hpp"

namespace ontomatch {

enum class Provenance { HCB, LlmConfirmed, BaselineLlm };

inline std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::HCB: return "HCB";
    case Provenance::LlmConfirmed: return "LLM-confirmed";
    case Provenance::BaselineLlm: return "baseline-LLM";
  }
  return "unknown";
}

inline Provenance parse_provenance(std::string_view s) {
  if (s == "HCB") return Provenance::HCB;
  if (s == "LLM-confirmed") return Provenance::LlmConfirmed;
  if (s == "baseline-LLM") return Provenance::BaselineLlm;
  throw Error(ErrorCode::MalformedRecord, "unknown provenance '" + std::string(s) + "'");
}

inline constexpr std::string_view kEquivalence = "equivalence";

struct Correspondence {
  std::string id;
  std::string source_id;
  std::string target_id;
  double confidence = 0.0;  // f_e of the pair, rounded
  Provenance provenance = Provenance::HCB;

  friend bool operator==(const Correspondence&, const Correspondence&) = default;
};

struct Alignment {
  std::string source_onto;
  std::string target_onto;
  std::size_t k = 0;
  double tau = 0.0;
  std::string provider_fingerprint;
  std::vector<Correspondence> correspondences;  // sorted by source_id

  std::set<std::pair<std::string, std::string>> pairs() const {
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& c : correspondences) out.emplace(c.source_id, c.target_id);
    return out;
  }

  void sort() {
    std::stable_sort(correspondences.begin(), correspondences.end(),
                     [](const Correspondence& a, const Correspondence& b) {
                       return a.source_id != b.source_id ? a.source_id < b.source_id : a.target_id < b.target_id;
                     });
  }
};

inline std::string serialize_alignment(const Alignment& a) {
  Alignment sorted = a;
  sorted.sort();
  std::string out = "# " + a.source_onto + "\t" + a.target_onto + "\t" + std::to_string(a.k) + "\t" +
                    format_double(a.tau) + "\t" + a.provider_fingerprint + "\n";
  for (const auto& c : sorted.correspondences) {
    out += c.source_id + "\t" + c.target_id + "\t" + std::string(kEquivalence) + "\t" + format_score(c.confidence) +
           "\t" + std::string(provenance_name(c.provenance)) + "\n";
  }
  return out;
}

inline void write_alignment(const Alignment& a, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_alignment(a));
}

inline Alignment parse_alignment(std::istream& in) {
  std::string raw;
  if (!std::getline(in, raw) || raw.rfind("# ", 0) != 0) {
    throw Error(ErrorCode::MalformedRecord, "line 1: missing alignment header");
  }
  auto header = split(std::string_view(strip_cr(raw)).substr(2), '\t');
  if (header.size() != 5) throw Error(ErrorCode::MalformedRecord, "line 1: expected 5 header fields");
  Alignment a;
  a.source_onto = std::string(header[0]);
  a.target_onto = std::string(header[1]);
  if (!parse_int(header[2], a.k) || !parse_double(header[3], a.tau)) {
    throw Error(ErrorCode::MalformedRecord, "line 1: bad k/tau");
  }
  a.provider_fingerprint = std::string(header[4]);
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line.empty() || line.front() == '#') continue;
    auto f = split(line, '\t');
    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": " + why);
    };
    if (f.size() != 5) throw bad("expected 5 fields");
    if (f[2] != kEquivalence) throw bad("unsupported relation '" + std::string(f[2]) + "'");
    Correspondence c;
    c.id = "c" + std::to_string(a.correspondences.size() + 1);
    c.source_id = std::string(f[0]);
    c.target_id = std::string(f[1]);
    if (!parse_double(f[3], c.confidence)) throw bad("bad confidence");
    try {
      c.provenance = parse_provenance(f[4]);
    } catch (const Error& e) {
      throw bad(e.what());
    }
    a.correspondences.push_back(std::move(c));
  }
  return a;
}

inline Alignment load_alignment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputNotFound, "cannot open alignment " + path.string());
  return parse_alignment(in);
}

enum class SplitTag { Full, Train, Test };

inline std::string_view split_tag_name(SplitTag t) {
  switch (t) {
    case SplitTag::Full: return "full";
    case SplitTag::Train: return "train";
    case SplitTag::Test: return "test";
  }
  return "full";
}

inline SplitTag parse_split_tag(std::string_view s) {
  if (s == "full") return SplitTag::Full;
  if (s == "train") return SplitTag::Train;
  if (s == "test") return SplitTag::Test;
  throw Error(ErrorCode::MalformedRecord, "unknown split tag '" + std::string(s) + "'");
}

struct ReferenceAlignment {
  std::set<std::pair<std::string, std::string>> pairs;
  SplitTag split = SplitTag::Full;

  bool contains(const std::string& s, const std::string& t) const { return pairs.count({s, t}) > 0; }
  std::size_t size() const { return pairs.size(); }
};

// `filter` keeps rows tagged with that split; untagged rows belong to every
// split. Filtering by Full keeps everything.
inline ReferenceAlignment parse_reference(std::istream& in, SplitTag filter = SplitTag::Full) {
  ReferenceAlignment ref;
  ref.split = filter;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (trim(line).empty() || line.front() == '#') continue;
    auto f = split(line, '\t');
    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": " + why);
    };
    if (f.size() < 2 || f.size() > 3) throw bad("expected source_id<TAB>target_id[<TAB>split]");
    auto s = trim(f[0]);
    auto t = trim(f[1]);
    if (s.empty() || t.empty()) throw bad("empty id");
    if (f.size() == 3 && filter != SplitTag::Full) {
      SplitTag tag;
      try {
        tag = parse_split_tag(trim(f[2]));
      } catch (const Error& e) {
        throw bad(e.what());
      }
      if (tag != SplitTag::Full && tag != filter) continue;
    }
    ref.pairs.emplace(std::string(s), std::string(t));
  }
  return ref;
}

inline ReferenceAlignment load_reference(const std::filesystem::path& path, SplitTag filter = SplitTag::Full) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputNotFound, "cannot open reference " + path.string());
  return parse_reference(in, filter);
}

inline std::string serialize_reference(const ReferenceAlignment& ref) {
  std::string out;
  for (const auto& [s, t] : ref.pairs) out += s + "\t" + t + "\n";
  return out;
}

inline void write_reference(const ReferenceAlignment& ref, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_reference(ref));
}

}  // namespace ontomatch
