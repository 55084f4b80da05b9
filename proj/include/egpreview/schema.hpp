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

#ifndef EGPREVIEW_SCHEMA_HPP_
#define EGPREVIEW_SCHEMA_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "egpreview/graph.hpp"

namespace egpreview {

// One vertex per entity type that has at least one entity.
struct SchemaVertex {
  std::string id;
  std::string label;
  TypeId origin{};  // handle in the source entity graph, if any

  friend bool operator==(const SchemaVertex&, const SchemaVertex&) = default;
};

// One edge per relationship type with at least one instance. `source` and
// `target` are schema vertex positions.
struct SchemaEdge {
  std::string id;
  std::string label;
  std::size_t source = 0;
  std::size_t target = 0;
  std::uint64_t instances = 0;
  RelationId origin{};

  friend bool operator==(const SchemaEdge&, const SchemaEdge&) = default;
};

// A relationship type seen from one of its endpoint types: the column a
// preview table keyed on `key` would get for `edge`.
struct AttributeCandidate {
  std::size_t key = 0;   // schema vertex position
  std::size_t edge = 0;  // schema edge position
  Direction direction = Direction::kOutgoing;

  friend auto operator<=>(const AttributeCandidate&, const AttributeCandidate&) = default;
};

// Schema multigraph. Vertices and edges are kept sorted by id, so positions
// double as a lexical tie-break everywhere downstream.
class SchemaGraph {
 public:
  SchemaGraph() = default;
  // Sorts both lists by id and validates endpoints and id uniqueness.
  // Throws GraphError on violations.
  SchemaGraph(std::vector<SchemaVertex> vertices, std::vector<SchemaEdge> edges);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const SchemaVertex> vertices() const { return vertices_; }
  std::span<const SchemaEdge> edges() const { return edges_; }
  const SchemaVertex& vertex(std::size_t v) const;
  const SchemaEdge& edge(std::size_t e) const;
  std::optional<std::size_t> find_vertex(std::string_view id) const;

  // w_ij: total instances over all relationship types joining the two types,
  // either direction. For i == j, self-loop instances counted once.
  std::uint64_t weight(std::size_t i, std::size_t j) const;

  friend bool operator==(const SchemaGraph& a, const SchemaGraph& b) {
    return a.vertices_ == b.vertices_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<SchemaVertex> vertices_;
  std::vector<SchemaEdge> edges_;
  std::vector<std::uint64_t> weights_;  // row-major, vertex_count^2
};

SchemaGraph derive_schema_graph(const EntityGraph& graph);

// Every (edge, direction) attaching to `key`, ordered by edge position then
// outgoing-first. A self-loop contributes one candidate per direction.
// Throws GraphError for an unknown vertex.
std::vector<AttributeCandidate> incident_candidates(const SchemaGraph& schema, std::size_t key);

// Hop counts on the undirected simple projection of a schema graph.
class DistanceIndex {
 public:
  DistanceIndex() = default;
  explicit DistanceIndex(const SchemaGraph& schema);

  std::size_t size() const { return size_; }
  // nullopt when the two vertices lie in different components.
  std::optional<std::uint32_t> between(std::size_t a, std::size_t b) const;
  bool within(std::size_t a, std::size_t b, std::uint32_t d) const;
  bool apart(std::size_t a, std::size_t b, std::uint32_t d) const;
  // Largest finite distance; 0 for graphs with fewer than two vertices.
  std::uint32_t diameter() const;

 private:
  static constexpr std::int32_t kUnreachable = -1;
  std::size_t size_ = 0;
  std::vector<std::int32_t> hops_;
};

DistanceIndex all_pairs_distance(const SchemaGraph& schema);

}  // namespace egpreview

#endif  // EGPREVIEW_SCHEMA_HPP_
