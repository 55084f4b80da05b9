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

#include "egpreview/schema.hpp"

#include <algorithm>
#include <deque>

namespace egpreview {

SchemaGraph::SchemaGraph(std::vector<SchemaVertex> vertices, std::vector<SchemaEdge> edges) {
  // Remember each vertex's original position so edges can be remapped.
  std::vector<std::size_t> order(vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return vertices[a].id < vertices[b].id;
  });
  std::vector<std::size_t> position(vertices.size());
  vertices_.reserve(vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && vertices[order[i]].id == vertices_.back().id) {
      throw GraphError("duplicate schema vertex '" + vertices[order[i]].id + "'");
    }
    position[order[i]] = i;
    vertices_.push_back(std::move(vertices[order[i]]));
  }

  for (auto& e : edges) {
    if (e.source >= vertices_.size() || e.target >= vertices_.size()) {
      throw GraphError("schema edge '" + e.id + "' references an unknown vertex");
    }
    e.source = position[e.source];
    e.target = position[e.target];
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const SchemaEdge& a, const SchemaEdge& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].id == edges[i - 1].id) {
      throw GraphError("duplicate schema edge '" + edges[i].id + "'");
    }
  }
  edges_ = std::move(edges);

  const std::size_t k = vertices_.size();
  weights_.assign(k * k, 0);
  for (const auto& e : edges_) {
    weights_[e.source * k + e.target] += e.instances;
    if (e.source != e.target) weights_[e.target * k + e.source] += e.instances;
  }
}

const SchemaVertex& SchemaGraph::vertex(std::size_t v) const {
  if (v >= vertices_.size()) throw GraphError("unknown schema vertex");
  return vertices_[v];
}

const SchemaEdge& SchemaGraph::edge(std::size_t e) const {
  if (e >= edges_.size()) throw GraphError("unknown schema edge");
  return edges_[e];
}

std::optional<std::size_t> SchemaGraph::find_vertex(std::string_view id) const {
  auto it = std::lower_bound(
      vertices_.begin(), vertices_.end(), id,
      [](const SchemaVertex& v, std::string_view key) { return v.id < key; });
  if (it == vertices_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::uint64_t SchemaGraph::weight(std::size_t i, std::size_t j) const {
  const std::size_t k = vertices_.size();
  if (i >= k || j >= k) throw GraphError("unknown schema vertex");
  return weights_[i * k + j];
}

SchemaGraph derive_schema_graph(const EntityGraph& graph) {
  std::vector<SchemaVertex> vertices;
  std::vector<std::size_t> position(graph.types().size(), 0);
  for (std::size_t t = 0; t < graph.types().size(); ++t) {
    const TypeId id{static_cast<std::uint32_t>(t)};
    if (graph.members(id).empty()) continue;
    position[t] = vertices.size();
    vertices.push_back({graph.types()[t].id, graph.types()[t].label, id});
  }
  std::vector<SchemaEdge> edges;
  for (std::size_t r = 0; r < graph.relations().size(); ++r) {
    const RelationId id{static_cast<std::uint32_t>(r)};
    const auto count = graph.instances(id).size();
    if (count == 0) continue;
    const RelationType& rel = graph.relations()[r];
    edges.push_back({rel.id, rel.label, position[to_index(rel.source)],
                     position[to_index(rel.target)], count, id});
  }
  return SchemaGraph(std::move(vertices), std::move(edges));
}

std::vector<AttributeCandidate> incident_candidates(const SchemaGraph& schema, std::size_t key) {
  if (key >= schema.vertex_count()) throw GraphError("unknown schema vertex");
  std::vector<AttributeCandidate> out;
  const auto edges = schema.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].source == key) out.push_back({key, e, Direction::kOutgoing});
    if (edges[e].target == key) out.push_back({key, e, Direction::kIncoming});
  }
  return out;
}

DistanceIndex::DistanceIndex(const SchemaGraph& schema) : size_(schema.vertex_count()) {
  std::vector<std::vector<std::size_t>> adjacent(size_);
  for (const auto& e : schema.edges()) {
    if (e.source == e.target) continue;
    adjacent[e.source].push_back(e.target);
    adjacent[e.target].push_back(e.source);
  }
  for (auto& list : adjacent) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  hops_.assign(size_ * size_, kUnreachable);
  std::deque<std::size_t> frontier;
  for (std::size_t s = 0; s < size_; ++s) {
    std::int32_t* row = hops_.data() + s * size_;
    row[s] = 0;
    frontier.assign(1, s);
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop_front();
      for (std::size_t v : adjacent[u]) {
        if (row[v] != kUnreachable) continue;
        row[v] = row[u] + 1;
        frontier.push_back(v);
      }
    }
  }
}

std::optional<std::uint32_t> DistanceIndex::between(std::size_t a, std::size_t b) const {
  if (a >= size_ || b >= size_) throw GraphError("unknown schema vertex");
  const std::int32_t h = hops_[a * size_ + b];
  if (h == kUnreachable) return std::nullopt;
  return static_cast<std::uint32_t>(h);
}

bool DistanceIndex::within(std::size_t a, std::size_t b, std::uint32_t d) const {
  auto h = between(a, b);
  return h && *h <= d;
}

bool DistanceIndex::apart(std::size_t a, std::size_t b, std::uint32_t d) const {
  auto h = between(a, b);
  return !h || *h >= d;
}

std::uint32_t DistanceIndex::diameter() const {
  std::int32_t best = 0;
  for (std::int32_t h : hops_) best = std::max(best, h);
  return static_cast<std::uint32_t>(best);
}

DistanceIndex all_pairs_distance(const SchemaGraph& schema) { return DistanceIndex(schema); }

}  // namespace egpreview
