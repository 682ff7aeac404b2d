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

// Vector knowledge bases, thresholded top-k label retrieval and the
// entity-level candidate databases (source->target and target->source).
//
// Scores are rounded to five decimals before any comparison, so every
// threshold and ordering decision is made on the persisted value.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ontomatch/embedding.hpp"
#include "ontomatch/error.hpp"
#include "ontomatch/ontology.hpp"
#include "ontomatch/text.hpp"

namespace ontomatch {

// Labels are stored sorted, so row order doubles as the label tie-break.
class VectorKB {
 public:
  VectorKB() = default;
  VectorKB(std::string ontology, std::size_t dim, std::string fingerprint)
      : ontology_(std::move(ontology)), dim_(dim), fingerprint_(std::move(fingerprint)) {}

  const std::string& ontology() const { return ontology_; }
  std::size_t dim() const { return dim_; }
  const std::string& fingerprint() const { return fingerprint_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& owners(std::size_t i) const { return owners_[i]; }
  std::span<const double> vector(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  double norm(std::size_t i) const { return norms_[i]; }

  std::optional<std::size_t> find(const std::string& label) const {
    auto it = row_of_.find(label);
    if (it == row_of_.end()) return std::nullopt;
    return it->second;
  }

  // Rows must arrive in ascending label order.
  void append(std::string label, std::vector<std::string> owners, std::span<const double> values) {
    if (values.size() != dim_) {
      throw Error(ErrorCode::DimensionMismatch, "KB row '" + label + "' has dim " +
                                                    std::to_string(values.size()) + ", KB dim " +
                                                    std::to_string(dim_));
    }
    if (!labels_.empty() && !(labels_.back() < label)) {
      throw Error(ErrorCode::MalformedRecord, "KB labels must be unique and sorted: '" + label + "'");
    }
    if (owners.empty()) throw Error(ErrorCode::MalformedRecord, "KB row '" + label + "' has no owners");
    double n = vector_norm(values);
    if (n == 0.0) throw Error(ErrorCode::ZeroVector, "label '" + label + "'");
    row_of_.emplace(label, labels_.size());
    labels_.push_back(std::move(label));
    std::sort(owners.begin(), owners.end());
    owners_.push_back(std::move(owners));
    data_.insert(data_.end(), values.begin(), values.end());
    norms_.push_back(n);
  }

  double build_seconds = 0.0;

 private:
  std::string ontology_;
  std::size_t dim_ = 0;
  std::string fingerprint_;
  std::vector<std::string> labels_;
  std::vector<std::vector<std::string>> owners_;
  std::vector<double> data_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t> row_of_;
};

namespace detail {
inline constexpr std::size_t kEncodeBatch = 1024;

inline std::string kb_header(const std::string& ontology, std::size_t dim, const std::string& fp) {
  return "# vector-kb\tdim=" + std::to_string(dim) + "\tontology=" + ontology + "\tprovider=" + fp + "\n";
}

inline void append_kb_row(std::string& out, const std::string& label, const std::vector<std::string>& owners,
                          std::span<const double> values) {
  out += label;
  out += '\t';
  for (std::size_t i = 0; i < owners.size(); ++i) {
    if (i) out += ',';
    out += owners[i];
  }
  out += '\t';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  out += '\n';
}

inline std::map<std::string, std::string> parse_header_fields(std::string_view line) {
  std::map<std::string, std::string> fields;
  for (auto part : split(line, '\t')) {
    auto eq = part.find('=');
    if (eq == std::string_view::npos) continue;
    fields.emplace(std::string(part.substr(0, eq)), std::string(part.substr(eq + 1)));
  }
  return fields;
}
}  // namespace detail

inline VectorKB build_vector_kb(const Ontology& o, const EntityTermIndex& idx, EmbeddingProvider& p) {
  Stopwatch timer;
  VectorKB kb(o.name(), p.dim(), p.fingerprint());
  const auto& terms = idx.term_to_entities();
  std::vector<std::string> batch;
  std::vector<std::vector<std::string>> batch_owners;
  auto flush = [&] {
    if (batch.empty()) return;
    auto vectors = p.encode_labels(batch);
    for (std::size_t i = 0; i < batch.size(); ++i) kb.append(std::move(batch[i]), std::move(batch_owners[i]), vectors[i].values());
    batch.clear();
    batch_owners.clear();
  };
  for (const auto& [term, ids] : terms) {
    batch.push_back(term);
    batch_owners.emplace_back(ids.begin(), ids.end());
    if (batch.size() == detail::kEncodeBatch) flush();
  }
  flush();
  kb.build_seconds = timer.seconds();
  return kb;
}

inline std::string serialize_vector_kb(const VectorKB& kb) {
  std::string out = detail::kb_header(kb.ontology(), kb.dim(), kb.fingerprint());
  for (std::size_t i = 0; i < kb.size(); ++i) detail::append_kb_row(out, kb.label(i), kb.owners(i), kb.vector(i));
  return out;
}

inline void write_vector_kb(const VectorKB& kb, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_vector_kb(kb));
}

// Encodes and writes the KB batch by batch without materializing it.
// Returns the elapsed wall time in seconds.
inline double stream_vector_kb(const Ontology& o, const EntityTermIndex& idx, EmbeddingProvider& p,
                               const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  Stopwatch timer;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::PersistFailure, "cannot write " + tmp.string());
    out << detail::kb_header(o.name(), p.dim(), p.fingerprint());
    std::vector<std::string> batch;
    std::vector<const EntityTermIndex::IdSet*> owners;
    std::string chunk;
    auto flush = [&] {
      if (batch.empty()) return;
      auto vectors = p.encode_labels(batch);
      chunk.clear();
      for (std::size_t i = 0; i < batch.size(); ++i) {
        std::vector<std::string> ids(owners[i]->begin(), owners[i]->end());
        detail::append_kb_row(chunk, batch[i], ids, vectors[i].values());
      }
      out << chunk;
      batch.clear();
      owners.clear();
    };
    for (const auto& [term, ids] : idx.term_to_entities()) {
      batch.push_back(term);
      owners.push_back(&ids);
      if (batch.size() == detail::kEncodeBatch) flush();
    }
    flush();
    out.flush();
    if (!out) throw Error(ErrorCode::PersistFailure, "short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::PersistFailure, "cannot rename into " + path.string());
  return timer.seconds();
}

inline VectorKB parse_vector_kb(std::istream& in) {
  std::string raw;
  if (!std::getline(in, raw) || raw.rfind("# vector-kb", 0) != 0) {
    throw Error(ErrorCode::MalformedRecord, "line 1: missing vector-kb header");
  }
  auto header = detail::parse_header_fields(strip_cr(raw));
  std::size_t dim = 0;
  if (!header.count("dim") || !parse_int(header["dim"], dim) || dim == 0) {
    throw Error(ErrorCode::MalformedRecord, "line 1: bad dim in vector-kb header");
  }
  VectorKB kb(header["ontology"], dim, header["provider"]);
  std::size_t line_no = 1;
  std::vector<double> values;
  values.reserve(dim);
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 3) throw bad("expected label<TAB>owners<TAB>floats");
    std::vector<std::string> owners;
    for (auto id : split(fields[1], ',')) owners.emplace_back(id);
    values.clear();
    for (auto f : split(fields[2], ',')) {
      double v;
      if (!parse_double(f, v)) throw bad("bad float '" + std::string(f) + "'");
      values.push_back(v);
    }
    try {
      kb.append(std::string(fields[0]), std::move(owners), values);
    } catch (const Error& e) {
      throw bad(e.what());
    }
  }
  return kb;
}

inline VectorKB load_vector_kb(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputNotFound, "cannot open vector KB " + path.string());
  return parse_vector_kb(in);
}

struct LabelHit {
  std::string label;
  std::vector<std::string> entities;  // ascending
  double score = 0.0;                 // rounded

  friend bool operator==(const LabelHit&, const LabelHit&) = default;
};

namespace detail {

struct RowHit {
  double score;
  std::size_t row;
};

// Best-k rows for one query, ordered by rounded score descending then row
// (= label) ascending. Shared by top_k_labels and the DB builder.
inline void top_k_rows(const VectorKB& kb, const double* q, double q_norm, std::size_t k, double tau,
                       std::vector<RowHit>& best) {
  best.clear();
  if (k == 0) return;
  // A raw cosine this far below a bound cannot round up to it.
  constexpr double kSlack = 1e-5;
  const std::size_t dim = kb.dim();
  for (std::size_t r = 0; r < kb.size(); ++r) {
    double raw = cosine_with_norms(q, kb.vector(r).data(), dim, q_norm, kb.norm(r));
    if (raw < tau - kSlack) continue;
    if (best.size() == k && raw < best.back().score - kSlack) continue;
    double s = round_score(raw);
    if (s < tau) continue;
    if (best.size() == k && !(s > best.back().score)) continue;  // later rows lose ties
    auto pos = std::upper_bound(best.begin(), best.end(), s,
                                [](double v, const RowHit& h) { return v > h.score; });
    best.insert(pos, RowHit{s, r});
    if (best.size() > k) best.pop_back();
  }
}

}  // namespace detail

// At most k labels of the KB whose rounded cosine with q is >= tau; score
// descending, ties by label ascending.
inline std::vector<LabelHit> top_k_labels(const VectorKB& kb, std::span<const double> q, std::size_t k,
                                          double tau) {
  if (kb.empty()) return {};
  if (q.size() != kb.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "query dim " + std::to_string(q.size()) + ", KB dim " +
                                                  std::to_string(kb.dim()));
  }
  double qn = vector_norm(q);
  if (qn == 0.0) throw Error(ErrorCode::ZeroVector, "query vector");
  std::vector<detail::RowHit> best;
  detail::top_k_rows(kb, q.data(), qn, k, tau, best);
  std::vector<LabelHit> out;
  out.reserve(best.size());
  for (const auto& h : best) out.push_back({kb.label(h.row), kb.owners(h.row), h.score});
  return out;
}

inline std::vector<LabelHit> top_k_labels(const VectorKB& kb, const EmbeddingVector& q, std::size_t k, double tau) {
  return top_k_labels(kb, q.values(), k, tau);
}

enum class Direction { SourceToTarget, TargetToSource };

inline std::string_view direction_name(Direction d) {
  return d == Direction::SourceToTarget ? "source2target" : "target2source";
}

struct Candidate {
  std::string id;
  double score = 0.0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct CandidateList {
  std::string owner;
  Direction direction = Direction::SourceToTarget;
  std::vector<Candidate> candidates;  // score descending, ties by id ascending

  bool empty() const { return candidates.empty(); }
  std::size_t size() const { return candidates.size(); }

  const Candidate* find(std::string_view id) const {
    for (const auto& c : candidates) {
      if (c.id == id) return &c;
    }
    return nullptr;
  }

  double max_score() const { return candidates.empty() ? 0.0 : candidates.front().score; }

  friend bool operator==(const CandidateList&, const CandidateList&) = default;
};

namespace detail {

// f_e: the best rounded label score reaching each counterpart entity.
inline CandidateList aggregate_hits(std::string owner, Direction dir, const VectorKB& kb,
                                    const std::vector<std::vector<RowHit>>& per_label,
                                    const EntityTermIndex* idx_opposite) {
  std::unordered_map<std::string, double> best;
  for (const auto& hits : per_label) {
    for (const auto& h : hits) {
      auto add = [&](const std::string& id) {
        auto [it, inserted] = best.try_emplace(id, h.score);
        if (!inserted && h.score > it->second) it->second = h.score;
      };
      if (idx_opposite) {
        for (const auto& id : idx_opposite->entities_with_term(kb.label(h.row))) add(id);
      } else {
        for (const auto& id : kb.owners(h.row)) add(id);
      }
    }
  }
  CandidateList list{std::move(owner), dir, {}};
  list.candidates.reserve(best.size());
  for (auto& [id, s] : best) list.candidates.push_back({id, s});
  std::sort(list.candidates.begin(), list.candidates.end(), [](const Candidate& a, const Candidate& b) {
    return a.score != b.score ? a.score > b.score : a.id < b.id;
  });
  return list;
}

}  // namespace detail

// Candidate counterparts of one entity against the opposite ontology's KB.
inline CandidateList candidate_entities(const VectorKB& kb_opposite, const EntityTermIndex& idx_opposite,
                                        const Entity& e, EmbeddingProvider& p, std::size_t k, double tau,
                                        Direction dir = Direction::SourceToTarget) {
  auto labels = e.labels();
  auto vectors = p.encode_labels(labels);
  std::vector<std::vector<detail::RowHit>> per_label(vectors.size());
  if (!kb_opposite.empty()) {
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (vectors[i].dim() != kb_opposite.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "query dim " + std::to_string(vectors[i].dim()) +
                                                      ", KB dim " + std::to_string(kb_opposite.dim()));
      }
      double qn = vector_norm(vectors[i].values());
      if (qn == 0.0) throw Error(ErrorCode::ZeroVector, "label '" + labels[i] + "'");
      detail::top_k_rows(kb_opposite, vectors[i].values().data(), qn, k, tau, per_label[i]);
    }
  }
  return detail::aggregate_hits(e.id, dir, kb_opposite, per_label, &idx_opposite);
}

struct CandidateDbParams {
  std::size_t k = 5;
  double tau = 0.75;
  std::string provider_fingerprint;

  friend bool operator==(const CandidateDbParams&, const CandidateDbParams&) = default;
};

class CandidateDB {
 public:
  CandidateDB() = default;
  CandidateDB(Direction dir, CandidateDbParams params) : direction_(dir), params_(std::move(params)) {}

  Direction direction() const { return direction_; }
  const CandidateDbParams& params() const { return params_; }
  const std::map<std::string, CandidateList>& lists() const { return lists_; }
  std::size_t size() const { return lists_.size(); }

  bool contains(std::string_view owner) const { return lists_.count(std::string(owner)) > 0; }

  const CandidateList& list(std::string_view owner) const {
    auto it = lists_.find(std::string(owner));
    if (it == lists_.end()) throw Error(ErrorCode::UnknownEntity, std::string(owner));
    return it->second;
  }

  void put(CandidateList list) {
    list.direction = direction_;
    std::string key = list.owner;
    lists_.insert_or_assign(std::move(key), std::move(list));
  }

  std::size_t total_candidates() const {
    std::size_t n = 0;
    for (const auto& [_, l] : lists_) n += l.size();
    return n;
  }

  double build_seconds = 0.0;

 private:
  Direction direction_ = Direction::SourceToTarget;
  CandidateDbParams params_;
  std::map<std::string, CandidateList> lists_;
};

namespace detail {

inline CandidateDB build_direction(Direction dir, const EntityTermIndex& query_idx, const VectorKB& query_kb,
                                   const VectorKB& opposite_kb, const EntityTermIndex& opposite_idx,
                                   const CandidateDbParams& params, unsigned workers) {
  if (!query_kb.empty() && !opposite_kb.empty() && query_kb.dim() != opposite_kb.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "KB dims differ: " + std::to_string(query_kb.dim()) + " vs " +
                                                  std::to_string(opposite_kb.dim()));
  }
  std::vector<const std::pair<const std::string, std::vector<std::string>>*> owners;
  owners.reserve(query_idx.entity_count());
  for (const auto& entry : query_idx.entity_to_terms()) owners.push_back(&entry);

  std::vector<CandidateList> results(owners.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr failure;
  auto work = [&] {
    std::vector<std::vector<RowHit>> per_label;
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= owners.size()) return;
      try {
        const auto& [owner, terms] = *owners[i];
        per_label.assign(terms.size(), {});
        if (!opposite_kb.empty()) {
          for (std::size_t t = 0; t < terms.size(); ++t) {
            auto row = query_kb.find(terms[t]);
            if (!row) throw Error(ErrorCode::MissingVector, "label '" + terms[t] + "' absent from " + query_kb.ontology() + " KB");
            top_k_rows(opposite_kb, query_kb.vector(*row).data(), query_kb.norm(*row), params.k, params.tau,
                       per_label[t]);
          }
        }
        results[i] = aggregate_hits(owner, dir, opposite_kb, per_label, &opposite_idx);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!failure) failure = std::current_exception();
        next.store(owners.size());
        return;
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(owners.size(), 1))));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  CandidateDB db(dir, params);
  for (auto& l : results) db.put(std::move(l));
  return db;
}

}  // namespace detail

inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct CandidateDbPair {
  CandidateDB source_to_target;
  CandidateDB target_to_source;
};

// Both directions from prebuilt KBs; query vectors come from the query
// side's own KB.
inline CandidateDbPair build_candidate_db(const VectorKB& src_kb, const EntityTermIndex& src_idx,
                                          const VectorKB& tgt_kb, const EntityTermIndex& tgt_idx, std::size_t k,
                                          double tau, unsigned workers = default_workers()) {
  if (k == 0) throw Error(ErrorCode::InvalidParameter, "k must be >= 1");
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidParameter, "tau must lie in [0, 1]");
  if (src_kb.fingerprint() != tgt_kb.fingerprint()) {
    throw Error(ErrorCode::MismatchedInputs, "source and target KBs come from different providers");
  }
  Stopwatch timer;
  CandidateDbParams params{k, tau, src_kb.fingerprint()};
  CandidateDbPair out{
      detail::build_direction(Direction::SourceToTarget, src_idx, src_kb, tgt_kb, tgt_idx, params, workers),
      detail::build_direction(Direction::TargetToSource, tgt_idx, tgt_kb, src_kb, src_idx, params, workers)};
  double elapsed = timer.seconds();
  out.source_to_target.build_seconds = elapsed;
  out.target_to_source.build_seconds = elapsed;
  return out;
}

inline CandidateDbPair build_candidate_db(const Ontology& src, const Ontology& tgt, EmbeddingProvider& p,
                                          std::size_t k, double tau, unsigned workers = default_workers()) {
  auto src_idx = build_entity_term_index(src);
  auto tgt_idx = build_entity_term_index(tgt);
  auto src_kb = build_vector_kb(src, src_idx, p);
  auto tgt_kb = build_vector_kb(tgt, tgt_idx, p);
  return build_candidate_db(src_kb, src_idx, tgt_kb, tgt_idx, k, tau, workers);
}

inline std::string serialize_candidate_db(const CandidateDB& db) {
  std::string out = "# candidate-db\tdirection=" + std::string(direction_name(db.direction())) +
                    "\tk=" + std::to_string(db.params().k) + "\ttau=" + format_double(db.params().tau) +
                    "\tprovider=" + db.params().provider_fingerprint + "\n";
  for (const auto& [owner, list] : db.lists()) {
    for (const auto& c : list.candidates) {
      out += owner;
      out += '\t';
      out += c.id;
      out += '\t';
      out += format_score(c.score);
      out += '\n';
    }
  }
  return out;
}

inline void write_candidate_db(const CandidateDB& db, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_candidate_db(db));
}

// Owners without rows are materialized as empty lists when their ids are
// supplied; rows for unknown owners are rejected in that case.
inline CandidateDB parse_candidate_db(std::istream& in, const std::vector<std::string>* owner_ids = nullptr) {
  std::string raw;
  if (!std::getline(in, raw) || raw.rfind("# candidate-db", 0) != 0) {
    throw Error(ErrorCode::MalformedRecord, "line 1: missing candidate-db header");
  }
  auto header = detail::parse_header_fields(strip_cr(raw));
  CandidateDbParams params;
  Direction dir;
  if (header["direction"] == "source2target") {
    dir = Direction::SourceToTarget;
  } else if (header["direction"] == "target2source") {
    dir = Direction::TargetToSource;
  } else {
    throw Error(ErrorCode::MalformedRecord, "line 1: bad direction");
  }
  if (!parse_int(header["k"], params.k) || !parse_double(header["tau"], params.tau)) {
    throw Error(ErrorCode::MalformedRecord, "line 1: bad k/tau");
  }
  params.provider_fingerprint = header["provider"];
  std::map<std::string, CandidateList> lists;
  if (owner_ids) {
    for (const auto& id : *owner_ids) lists[id] = CandidateList{id, dir, {}};
  }
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 3) throw bad("expected owner<TAB>candidate<TAB>score");
    double score;
    if (!parse_double(fields[2], score)) throw bad("bad score");
    if (score < params.tau) throw bad("score below tau");
    std::string owner(fields[0]);
    auto it = lists.find(owner);
    if (it == lists.end()) {
      if (owner_ids) throw bad("unknown owner " + owner);
      it = lists.emplace(owner, CandidateList{owner, dir, {}}).first;
    }
    auto& cands = it->second.candidates;
    if (!cands.empty() && (score > cands.back().score ||
                           (score == cands.back().score && !(cands.back().id < fields[1])))) {
      throw bad("rows out of rank order");
    }
    cands.push_back({std::string(fields[1]), score});
  }
  CandidateDB db(dir, params);
  for (auto& [_, l] : lists) db.put(std::move(l));
  return db;
}

inline CandidateDB load_candidate_db(const std::filesystem::path& path,
                                     const std::vector<std::string>* owner_ids = nullptr) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputNotFound, "cannot open candidate DB " + path.string());
  return parse_candidate_db(in, owner_ids);
}

}  // namespace ontomatch
