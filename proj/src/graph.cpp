// Copyright 2026 The egpreview Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "egpreview/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace egpreview {

namespace {

std::string decode_text(std::string_view token) {
  std::string out(token);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::string encode_text(std::string_view text) {
  std::string out(text);
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

// Splits a line on ASCII whitespace, dropping everything from a `#` that
// starts a token.
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
  };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size() || line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::string describe_line(std::size_t line) {
  return line == 0 ? std::string() : "line " + std::to_string(line) + ": ";
}

// Sorts pending declarations by id and rejects duplicates. Returns the
// id -> dense index map.
template <typename Pending>
std::map<std::string, std::uint32_t, std::less<>> index_ids(
    std::vector<const Pending*>& sorted, const char* what) {
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Pending* a, const Pending* b) { return a->id < b->id; });
  std::map<std::string, std::uint32_t, std::less<>> index;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0 && sorted[i]->id == sorted[i - 1]->id) {
      throw ParseError(sorted[i]->line,
                       std::string("duplicate ") + what + " '" + sorted[i]->id + "'");
    }
    index.emplace(sorted[i]->id, static_cast<std::uint32_t>(i));
  }
  return index;
}

template <typename Map>
std::uint32_t resolve(const Map& index, const std::string& id, const char* what,
                      std::size_t line) {
  auto it = index.find(id);
  if (it == index.end()) {
    throw ParseError(line, std::string("undeclared ") + what + " '" + id + "'");
  }
  return it->second;
}

}  // namespace

std::string_view to_string(Direction direction) {
  return direction == Direction::kOutgoing ? "outgoing" : "incoming";
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error(describe_line(line) + message), line_(line) {}

const EntityType& EntityGraph::type(TypeId id) const {
  if (to_index(id) >= types_.size()) throw GraphError("unknown entity type handle");
  return types_[to_index(id)];
}

const RelationType& EntityGraph::relation(RelationId id) const {
  if (to_index(id) >= relations_.size()) throw GraphError("unknown relationship type handle");
  return relations_[to_index(id)];
}

const Entity& EntityGraph::entity(EntityId id) const {
  if (to_index(id) >= entities_.size()) throw GraphError("unknown entity handle");
  return entities_[to_index(id)];
}

namespace {

template <typename T>
std::optional<std::uint32_t> find_by_id(const std::vector<T>& items, std::string_view id) {
  auto it = std::lower_bound(items.begin(), items.end(), id,
                             [](const T& item, std::string_view key) { return item.id < key; });
  if (it == items.end() || it->id != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - items.begin());
}

}  // namespace

std::optional<TypeId> EntityGraph::find_type(std::string_view id) const {
  if (auto i = find_by_id(types_, id)) return TypeId{*i};
  return std::nullopt;
}

std::optional<RelationId> EntityGraph::find_relation(std::string_view id) const {
  if (auto i = find_by_id(relations_, id)) return RelationId{*i};
  return std::nullopt;
}

std::optional<EntityId> EntityGraph::find_entity(std::string_view id) const {
  if (auto i = find_by_id(entities_, id)) return EntityId{*i};
  return std::nullopt;
}

TypeId EntityGraph::type_id(std::string_view id) const {
  if (auto t = find_type(id)) return *t;
  throw GraphError("unknown entity type '" + std::string(id) + "'");
}

RelationId EntityGraph::relation_id(std::string_view id) const {
  if (auto r = find_relation(id)) return *r;
  throw GraphError("unknown relationship type '" + std::string(id) + "'");
}

std::span<const EntityId> EntityGraph::members(TypeId type) const {
  if (to_index(type) >= members_.size()) throw GraphError("unknown entity type handle");
  return members_[to_index(type)];
}

std::span<const Edge> EntityGraph::instances(RelationId relation) const {
  const std::size_t r = to_index(relation);
  if (r >= relations_.size()) throw GraphError("unknown relationship type handle");
  return std::span<const Edge>(edges_).subspan(relation_begin_[r],
                                               relation_begin_[r + 1] - relation_begin_[r]);
}

std::vector<EntityId> EntityGraph::neighbors(EntityId entity, RelationId relation,
                                             Direction direction) const {
  const std::size_t r = to_index(relation);
  if (r >= relations_.size()) throw GraphError("unknown relationship type handle");
  std::vector<EntityId> out;
  if (direction == Direction::kOutgoing) {
    auto range = instances(relation);
    auto lo = std::partition_point(range.begin(), range.end(),
                                   [&](const Edge& e) { return e.source < entity; });
    for (auto it = lo; it != range.end() && it->source == entity; ++it) {
      out.push_back(it->target);
    }
  } else {
    auto first = by_target_.begin() + static_cast<std::ptrdiff_t>(relation_begin_[r]);
    auto last = by_target_.begin() + static_cast<std::ptrdiff_t>(relation_begin_[r + 1]);
    auto lo = std::partition_point(
        first, last, [&](std::size_t i) { return edges_[i].target < entity; });
    for (auto it = lo; it != last && edges_[*it].target == entity; ++it) {
      out.push_back(edges_[*it].source);
    }
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void EntityGraphBuilder::add_type(std::string id, std::string label, std::size_t line) {
  types_.push_back({std::move(id), std::move(label), line});
}

void EntityGraphBuilder::add_relation(std::string id, std::string label,
                                      std::string source_type, std::string target_type,
                                      std::size_t line) {
  relations_.push_back(
      {std::move(id), std::move(label), std::move(source_type), std::move(target_type), line});
}

void EntityGraphBuilder::add_entity(std::string id, std::string name,
                                    std::vector<std::string> types, std::size_t line) {
  if (types.empty()) throw ParseError(line, "entity '" + id + "' declares no type");
  entities_.push_back({std::move(id), std::move(name), std::move(types), line});
}

void EntityGraphBuilder::add_edge(std::string relation, std::string source,
                                  std::string target, std::size_t line) {
  edges_.push_back({std::move(relation), std::move(source), std::move(target), line});
}

EntityGraph EntityGraphBuilder::build() const {
  EntityGraph g;

  std::vector<const PendingType*> types;
  for (const auto& t : types_) types.push_back(&t);
  const auto type_index = index_ids(types, "entity type");
  for (const auto* t : types) g.types_.push_back({t->id, t->label});

  std::vector<const PendingRelation*> relations;
  for (const auto& r : relations_) relations.push_back(&r);
  const auto relation_index = index_ids(relations, "relationship type");
  for (const auto* r : relations) {
    g.relations_.push_back({r->id, r->label,
                            TypeId{resolve(type_index, r->source, "entity type", r->line)},
                            TypeId{resolve(type_index, r->target, "entity type", r->line)}});
  }

  std::vector<const PendingEntity*> entities;
  for (const auto& e : entities_) entities.push_back(&e);
  const auto entity_index = index_ids(entities, "entity");
  g.members_.assign(g.types_.size(), {});
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const auto* e = entities[i];
    Entity entity{e->id, e->name, {}};
    for (const auto& t : e->types) {
      entity.types.push_back(TypeId{resolve(type_index, t, "entity type", e->line)});
    }
    std::sort(entity.types.begin(), entity.types.end());
    entity.types.erase(std::unique(entity.types.begin(), entity.types.end()),
                       entity.types.end());
    for (TypeId t : entity.types) g.members_[to_index(t)].push_back(EntityId{
        static_cast<std::uint32_t>(i)});
    g.entities_.push_back(std::move(entity));
  }

  for (const auto& e : edges_) {
    const RelationId r{resolve(relation_index, e.relation, "relationship type", e.line)};
    const EntityId src{resolve(entity_index, e.source, "entity", e.line)};
    const EntityId dst{resolve(entity_index, e.target, "entity", e.line)};
    const RelationType& rel = g.relations_[to_index(r)];
    auto has_type = [&](EntityId v, TypeId t) {
      const auto& ts = g.entities_[to_index(v)].types;
      return std::binary_search(ts.begin(), ts.end(), t);
    };
    if (!has_type(src, rel.source)) {
      throw ParseError(e.line, "source entity '" + e.source + "' of relationship '" +
                                   rel.id + "' lacks type '" +
                                   g.types_[to_index(rel.source)].id + "'");
    }
    if (!has_type(dst, rel.target)) {
      throw ParseError(e.line, "target entity '" + e.target + "' of relationship '" +
                                   rel.id + "' lacks type '" +
                                   g.types_[to_index(rel.target)].id + "'");
    }
    g.edges_.push_back({r, src, dst});
  }
  std::sort(g.edges_.begin(), g.edges_.end());

  g.relation_begin_.assign(g.relations_.size() + 1, 0);
  for (const Edge& e : g.edges_) ++g.relation_begin_[to_index(e.relation) + 1];
  for (std::size_t r = 0; r < g.relations_.size(); ++r) {
    g.relation_begin_[r + 1] += g.relation_begin_[r];
  }
  g.by_target_.resize(g.edges_.size());
  for (std::size_t i = 0; i < g.edges_.size(); ++i) g.by_target_[i] = i;
  std::stable_sort(g.by_target_.begin(), g.by_target_.end(),
                   [&](std::size_t a, std::size_t b) {
                     const Edge& x = g.edges_[a];
                     const Edge& y = g.edges_[b];
                     return std::tie(x.relation, x.target, x.source) <
                            std::tie(y.relation, y.target, y.source);
                   });
  return g;
}

EntityGraph parse_entity_graph(std::istream& in) {
  EntityGraphBuilder builder;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto fields = tokenize(line);
    if (fields.empty()) continue;
    const std::string_view tag = fields[0];
    auto expect = [&](std::size_t count) {
      if (fields.size() != count) {
        throw ParseError(number, "'" + std::string(tag) + "' record expects " +
                                     std::to_string(count - 1) + " fields, got " +
                                     std::to_string(fields.size() - 1));
      }
    };
    if (tag == "ET") {
      expect(3);
      builder.add_type(std::string(fields[1]), decode_text(fields[2]), number);
    } else if (tag == "RT") {
      expect(5);
      builder.add_relation(std::string(fields[1]), decode_text(fields[2]),
                           std::string(fields[3]), std::string(fields[4]), number);
    } else if (tag == "EN") {
      if (fields.size() < 4) {
        throw ParseError(number, "'EN' record expects an id, a name and at least one type");
      }
      std::vector<std::string> types(fields.begin() + 3, fields.end());
      builder.add_entity(std::string(fields[1]), decode_text(fields[2]), std::move(types),
                         number);
    } else if (tag == "ED") {
      expect(4);
      builder.add_edge(std::string(fields[1]), std::string(fields[2]),
                       std::string(fields[3]), number);
    } else {
      throw ParseError(number, "unknown record tag '" + std::string(tag) + "'");
    }
  }
  if (in.bad()) throw IoError("read failure");
  return builder.build();
}

EntityGraph parse_entity_graph(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_entity_graph(in);
}

EntityGraph load_entity_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_entity_graph(in);
}

void write_entity_graph(std::ostream& out, const EntityGraph& graph) {
  for (const auto& t : graph.types()) {
    out << "ET " << t.id << ' ' << encode_text(t.label) << '\n';
  }
  for (const auto& r : graph.relations()) {
    out << "RT " << r.id << ' ' << encode_text(r.label) << ' '
        << graph.type(r.source).id << ' ' << graph.type(r.target).id << '\n';
  }
  for (const auto& e : graph.entities()) {
    out << "EN " << e.id << ' ' << encode_text(e.name);
    for (TypeId t : e.types) out << ' ' << graph.type(t).id;
    out << '\n';
  }
  for (const auto& e : graph.edges()) {
    out << "ED " << graph.relation(e.relation).id << ' ' << graph.entity(e.source).id << ' '
        << graph.entity(e.target).id << '\n';
  }
}

}  // namespace egpreview
