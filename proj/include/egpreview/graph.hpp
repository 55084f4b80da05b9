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

#ifndef EGPREVIEW_GRAPH_HPP_
#define EGPREVIEW_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace egpreview {

// Dense handles into an EntityGraph. Handles are assigned in ascending order
// of the textual id, so comparing handles compares ids lexically.
enum class TypeId : std::uint32_t {};
enum class RelationId : std::uint32_t {};
enum class EntityId : std::uint32_t {};

constexpr std::size_t to_index(TypeId id) { return static_cast<std::size_t>(id); }
constexpr std::size_t to_index(RelationId id) { return static_cast<std::size_t>(id); }
constexpr std::size_t to_index(EntityId id) { return static_cast<std::size_t>(id); }

// Orientation of a relationship type relative to the entity type it is
// attached to. Outgoing sorts first.
enum class Direction : std::uint8_t { kOutgoing = 0, kIncoming = 1 };

std::string_view to_string(Direction direction);

// Raised for malformed input. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Raised for lookups of unknown ids or handles.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an input file cannot be opened or read.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EntityType {
  std::string id;
  std::string label;

  friend bool operator==(const EntityType&, const EntityType&) = default;
};

struct RelationType {
  std::string id;
  std::string label;
  TypeId source;
  TypeId target;

  friend bool operator==(const RelationType&, const RelationType&) = default;
};

struct Entity {
  std::string id;
  std::string name;
  std::vector<TypeId> types;  // sorted, unique, non-empty

  friend bool operator==(const Entity&, const Entity&) = default;
};

struct Edge {
  RelationId relation;
  EntityId source;
  EntityId target;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Typed directed multigraph of entities. Immutable once built; all containers
// are in canonical (id-sorted) order so that equal inputs compare equal no
// matter how they were produced.
class EntityGraph {
 public:
  EntityGraph() = default;

  std::span<const EntityType> types() const { return types_; }
  std::span<const RelationType> relations() const { return relations_; }
  std::span<const Entity> entities() const { return entities_; }
  // Sorted by (relation, source, target); duplicates retained.
  std::span<const Edge> edges() const { return edges_; }

  const EntityType& type(TypeId id) const;
  const RelationType& relation(RelationId id) const;
  const Entity& entity(EntityId id) const;

  std::optional<TypeId> find_type(std::string_view id) const;
  std::optional<RelationId> find_relation(std::string_view id) const;
  std::optional<EntityId> find_entity(std::string_view id) const;

  // Throwing variants of the find_* lookups.
  TypeId type_id(std::string_view id) const;
  RelationId relation_id(std::string_view id) const;

  // Entities carrying `type`, ascending.
  std::span<const EntityId> members(TypeId type) const;

  // Instances of `relation`, in edge order.
  std::span<const Edge> instances(RelationId relation) const;

  // Distinct entities reached from `entity` over `relation`, following the
  // edge forwards (kOutgoing) or backwards (kIncoming). Ascending.
  std::vector<EntityId> neighbors(EntityId entity, RelationId relation,
                                  Direction direction) const;

  friend bool operator==(const EntityGraph&, const EntityGraph&) = default;

 private:
  friend class EntityGraphBuilder;

  std::vector<EntityType> types_;
  std::vector<RelationType> relations_;
  std::vector<Entity> entities_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EntityId>> members_;
  // edges_[relation_begin_[r], relation_begin_[r + 1]) are instances of r.
  std::vector<std::size_t> relation_begin_;
  // Indices into edges_, grouped by relation and sorted by (target, source).
  std::vector<std::size_t> by_target_;
};

// Accumulates declarations in any order and validates them in build().
// Textual ids are resolved only at build time, so references may precede
// their declarations.
class EntityGraphBuilder {
 public:
  // `line` is carried into error messages; pass 0 when not parsing a file.
  void add_type(std::string id, std::string label, std::size_t line = 0);
  void add_relation(std::string id, std::string label, std::string source_type,
                    std::string target_type, std::size_t line = 0);
  void add_entity(std::string id, std::string name,
                  std::vector<std::string> types, std::size_t line = 0);
  void add_edge(std::string relation, std::string source, std::string target,
                std::size_t line = 0);

  // Throws ParseError on duplicate declarations, dangling references, or
  // edges whose endpoints do not carry the relationship's declared types.
  EntityGraph build() const;

 private:
  struct PendingType {
    std::string id, label;
    std::size_t line;
  };
  struct PendingRelation {
    std::string id, label, source, target;
    std::size_t line;
  };
  struct PendingEntity {
    std::string id, name;
    std::vector<std::string> types;
    std::size_t line;
  };
  struct PendingEdge {
    std::string relation, source, target;
    std::size_t line;
  };

  std::vector<PendingType> types_;
  std::vector<PendingRelation> relations_;
  std::vector<PendingEntity> entities_;
  std::vector<PendingEdge> edges_;
};

// Line-oriented text format:
//   ET <type-id> <label>
//   RT <relation-id> <label> <source-type-id> <target-type-id>
//   EN <entity-id> <name> <type-id> [<type-id>...]
//   ED <relation-id> <source-entity-id> <target-entity-id>
// Fields are whitespace separated; `#` starts a comment. Underscores in
// labels and names stand for spaces and are decoded on read.
EntityGraph parse_entity_graph(std::istream& in);
EntityGraph parse_entity_graph(std::string_view text);
EntityGraph load_entity_graph(const std::string& path);

// Writes `graph` in the format accepted by parse_entity_graph.
void write_entity_graph(std::ostream& out, const EntityGraph& graph);

}  // namespace egpreview

#endif  // EGPREVIEW_GRAPH_HPP_
