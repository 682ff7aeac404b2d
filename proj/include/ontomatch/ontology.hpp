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

// Ontology label dumps and the entity-term index.
//
// Dump format, one record per line, tab separated:
//
//   entity_id <TAB> preferred_label <TAB> synonym_1|synonym_2|...
//
// The synonym field may be empty or absent. Lines starting with '#' and
// blank lines are ignored. Labels are whitespace-normalized on load and a
// synonym equal to the preferred label (or repeated) is dropped.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ontomatch/error.hpp"
#include "ontomatch/text.hpp"

namespace ontomatch {

struct Entity {
  std::string id;
  std::string preferred_label;
  std::vector<std::string> synonyms;  // load order, deduplicated

  // Preferred label first, then synonyms in load order.
  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(1 + synonyms.size());
    out.push_back(preferred_label);
    out.insert(out.end(), synonyms.begin(), synonyms.end());
    return out;
  }

  friend bool operator==(const Entity&, const Entity&) = default;
};

inline bool valid_entity_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (is_space(c) || c == ',' || c == '|') return false;
  }
  return true;
}

// Builds an entity with normalized labels and deduplicated synonyms.
inline Entity make_entity(std::string id, std::string_view preferred,
                          const std::vector<std::string>& synonyms = {}) {
  Entity e;
  e.id = std::move(id);
  e.preferred_label = normalize_label(preferred);
  std::set<std::string> seen{e.preferred_label};
  for (const auto& s : synonyms) {
    std::string norm = normalize_label(s);
    if (seen.insert(norm).second) e.synonyms.push_back(std::move(norm));
  }
  return e;
}

class Ontology {
 public:
  Ontology(std::string name, std::vector<Entity> entities)
      : name_(std::move(name)), entities_(std::move(entities)) {
    if (name_.empty()) throw Error(ErrorCode::InvalidParameter, "ontology name must be nonempty");
    if (entities_.empty()) throw Error(ErrorCode::EmptyOntology, "ontology '" + name_ + "' has no entities");
    by_id_.reserve(entities_.size());
    for (std::size_t i = 0; i < entities_.size(); ++i) {
      const Entity& e = entities_[i];
      if (!valid_entity_id(e.id)) throw Error(ErrorCode::MalformedRecord, "invalid entity id '" + e.id + "'");
      if (e.preferred_label.empty()) throw Error(ErrorCode::MalformedRecord, "entity " + e.id + " has an empty preferred label");
      for (const auto& s : e.synonyms) {
        if (s.empty()) throw Error(ErrorCode::MalformedRecord, "entity " + e.id + " has an empty synonym");
        if (s == e.preferred_label) throw Error(ErrorCode::MalformedRecord, "entity " + e.id + " repeats its preferred label as a synonym");
      }
      if (!by_id_.emplace(e.id, i).second) throw Error(ErrorCode::DuplicateEntityId, e.id);
    }
  }

  const std::string& name() const { return name_; }
  const std::vector<Entity>& entities() const { return entities_; }
  std::size_t size() const { return entities_.size(); }

  const Entity* find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &entities_[it->second];
  }

  const Entity& at(std::string_view id) const {
    const Entity* e = find(id);
    if (!e) throw Error(ErrorCode::UnknownEntity, std::string(id));
    return *e;
  }

  // Entity ids in ascending order.
  std::vector<std::string> sorted_ids() const {
    std::vector<std::string> ids;
    ids.reserve(entities_.size());
    for (const auto& e : entities_) ids.push_back(e.id);
    std::sort(ids.begin(), ids.end());
    return ids;
  }

  std::size_t label_count() const {
    std::size_t n = 0;
    for (const auto& e : entities_) n += 1 + e.synonyms.size();
    return n;
  }

 private:
  std::string name_;
  std::vector<Entity> entities_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

inline Ontology parse_ontology(std::istream& in, const std::string& name) {
  std::vector<Entity> entities;
  std::unordered_map<std::string, std::size_t> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = strip_cr(raw);
    if (trim(line).empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() < 2 || fields.size() > 3) throw bad("expected 2 or 3 tab-separated fields");
    std::string id(trim(fields[0]));
    if (!valid_entity_id(id)) throw bad("invalid entity id '" + id + "'");
    std::string preferred = normalize_label(fields[1]);
    if (preferred.empty()) throw bad("empty preferred label");
    std::vector<std::string> synonyms;
    if (fields.size() == 3 && !trim(fields[2]).empty()) {
      for (auto syn : split(fields[2], '|')) {
        std::string norm = normalize_label(syn);
        if (norm.empty()) throw bad("empty synonym");
        synonyms.push_back(std::move(norm));
      }
    }
    if (seen.count(id)) {
      throw Error(ErrorCode::DuplicateEntityId,
                  id + " (line " + std::to_string(line_no) + ")");
    }
    seen.emplace(id, entities.size());
    entities.push_back(make_entity(std::move(id), preferred, synonyms));
  }
  if (entities.empty()) throw Error(ErrorCode::EmptyOntology, "ontology '" + name + "' has no entities");
  return Ontology(name, std::move(entities));
}

inline Ontology load_ontology(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputNotFound, "cannot open ontology dump " + path.string());
  return parse_ontology(in, name);
}

inline std::string serialize_ontology_dump(const Ontology& o) {
  std::string out;
  for (const auto& e : o.entities()) {
    out += e.id;
    out += '\t';
    out += e.preferred_label;
    out += '\t';
    for (std::size_t i = 0; i < e.synonyms.size(); ++i) {
      if (i) out += '|';
      out += e.synonyms[i];
    }
    out += '\n';
  }
  return out;
}

inline void write_ontology_dump(const Ontology& o, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_ontology_dump(o));
}

// Three mutually consistent tables: entity -> labels, preferred label ->
// entities, and any label -> entities. Immutable once built.
class EntityTermIndex {
 public:
  using IdSet = std::set<std::string>;

  const std::map<std::string, std::vector<std::string>>& entity_to_terms() const { return entity_to_terms_; }
  const std::map<std::string, IdSet>& preferred_to_entity() const { return preferred_to_entity_; }
  const std::map<std::string, IdSet>& term_to_entities() const { return term_to_entities_; }

  const std::vector<std::string>& labels_of(std::string_view id) const {
    auto it = entity_to_terms_.find(std::string(id));
    if (it == entity_to_terms_.end()) throw Error(ErrorCode::UnknownEntity, std::string(id));
    return it->second;
  }

  const std::string& preferred_label(std::string_view id) const { return labels_of(id).front(); }

  const IdSet& entities_with_term(std::string_view term) const {
    static const IdSet kEmpty;
    auto it = term_to_entities_.find(std::string(term));
    return it == term_to_entities_.end() ? kEmpty : it->second;
  }

  const IdSet& entities_with_preferred(std::string_view term) const {
    static const IdSet kEmpty;
    auto it = preferred_to_entity_.find(std::string(term));
    return it == preferred_to_entity_.end() ? kEmpty : it->second;
  }

  bool contains(std::string_view id) const { return entity_to_terms_.count(std::string(id)) > 0; }
  std::size_t entity_count() const { return entity_to_terms_.size(); }
  std::size_t term_count() const { return term_to_entities_.size(); }

  // Stable text form of all three tables, used for determinism checks.
  std::string canonical_string() const {
    std::ostringstream out;
    out << "[entity-term]\n";
    for (const auto& [id, terms] : entity_to_terms_) {
      out << id;
      for (const auto& t : terms) out << '\t' << t;
      out << '\n';
    }
    auto dump = [&](const char* title, const std::map<std::string, IdSet>& table) {
      out << title << '\n';
      for (const auto& [term, ids] : table) {
        out << term;
        for (const auto& id : ids) out << '\t' << id;
        out << '\n';
      }
    };
    dump("[preferred-term-entity]", preferred_to_entity_);
    dump("[term-entity]", term_to_entities_);
    return out.str();
  }

 private:
  friend EntityTermIndex build_entity_term_index(const Ontology& o);

  std::map<std::string, std::vector<std::string>> entity_to_terms_;
  std::map<std::string, IdSet> preferred_to_entity_;
  std::map<std::string, IdSet> term_to_entities_;
};

inline EntityTermIndex build_entity_term_index(const Ontology& o) {
  EntityTermIndex idx;
  for (const auto& e : o.entities()) {
    auto labels = e.labels();
    for (const auto& l : labels) idx.term_to_entities_[l].insert(e.id);
    idx.preferred_to_entity_[e.preferred_label].insert(e.id);
    idx.entity_to_terms_.emplace(e.id, std::move(labels));
  }
  return idx;
}

inline const std::vector<std::string>& labels_of(const EntityTermIndex& idx, std::string_view id) {
  return idx.labels_of(id);
}

}  // namespace ontomatch
