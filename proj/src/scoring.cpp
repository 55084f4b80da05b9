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

#include "egpreview/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace egpreview {

std::string_view to_string(KeyMeasure measure) {
  return measure == KeyMeasure::kCoverage ? "coverage" : "randomwalk";
}

std::string_view to_string(NonKeyMeasure measure) {
  return measure == NonKeyMeasure::kCoverage ? "coverage" : "entropy";
}

std::optional<KeyMeasure> parse_key_measure(std::string_view text) {
  if (text == "coverage") return KeyMeasure::kCoverage;
  if (text == "randomwalk" || text == "random-walk") return KeyMeasure::kRandomWalk;
  return std::nullopt;
}

std::optional<NonKeyMeasure> parse_nonkey_measure(std::string_view text) {
  if (text == "coverage") return NonKeyMeasure::kCoverage;
  if (text == "entropy") return NonKeyMeasure::kEntropy;
  return std::nullopt;
}

ConvergenceError::ConvergenceError(std::size_t iterations, double residual)
    : ScoringError("random walk did not converge after " + std::to_string(iterations) +
                   " iterations (residual " + std::to_string(residual) + ")"),
      iterations_(iterations),
      residual_(residual) {}

std::uint64_t key_coverage(const EntityGraph& graph, TypeId type) {
  return graph.members(type).size();
}

DenseMatrix transition_matrix(const SchemaGraph& schema) {
  const std::size_t k = schema.vertex_count();
  DenseMatrix m{k, std::vector<double>(k * k, 0.0)};
  for (std::size_t i = 0; i < k; ++i) {
    std::uint64_t total = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) total += schema.weight(i, j);
    }
    if (total == 0) continue;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) {
        m(i, j) = static_cast<double>(schema.weight(i, j)) / static_cast<double>(total);
      }
    }
  }
  return m;
}

DenseMatrix perturbed_transition_matrix(const SchemaGraph& schema, double teleport) {
  DenseMatrix m = transition_matrix(schema);
  const std::size_t k = m.size;
  if (k < 2) return m;
  for (std::size_t i = 0; i < k; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < k; ++j) row += m(i, j);
    if (row == 0.0) {
      for (std::size_t j = 0; j < k; ++j) {
        m(i, j) = j == i ? 0.0 : 1.0 / static_cast<double>(k - 1);
      }
      continue;
    }
    const double norm = 1.0 + teleport * static_cast<double>(k - 1);
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) m(i, j) = (m(i, j) + teleport) / norm;
    }
  }
  return m;
}

namespace {

// y = x M
void left_multiply(const DenseMatrix& m, const std::vector<double>& x, std::vector<double>& y) {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < m.size; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = m.values.data() + i * m.size;
    for (std::size_t j = 0; j < m.size; ++j) y[j] += xi * row[j];
  }
}

void normalize(std::vector<double>& x) {
  const double total = std::accumulate(x.begin(), x.end(), 0.0);
  for (double& v : x) v /= total;
}

}  // namespace

StationaryDistribution random_walk_scores(const SchemaGraph& schema,
                                          const RandomWalkConfig& config) {
  const std::size_t k = schema.vertex_count();
  if (k == 0) throw ScoringError("random walk needs at least one entity type");
  if (!(config.tolerance > 0.0)) throw ScoringError("tolerance must be positive");
  if (config.max_iterations == 0) throw ScoringError("max_iterations must be positive");
  if (k == 1) return {{1.0}, 0, 0.0};
  if (!(config.teleport > 0.0) ||
      !(config.teleport < 1.0 / static_cast<double>(k - 1))) {
    throw ScoringError("teleport must lie in (0, 1/(K-1)) for K = " + std::to_string(k));
  }

  const DenseMatrix m = perturbed_transition_matrix(schema, config.teleport);
  std::vector<double> pi(k, 1.0 / static_cast<double>(k));
  std::vector<double> next(k);
  double residual = 0.0;
  // Iterates the lazy chain (I + M') / 2: same fixed point as M', but
  // aperiodic, so bipartite schemas do not oscillate.
  for (std::size_t iteration = 0; iteration < config.max_iterations; ++iteration) {
    left_multiply(m, pi, next);
    residual = 0.0;
    for (std::size_t j = 0; j < k; ++j) residual += std::abs(next[j] - pi[j]);
    if (residual <= config.tolerance) return {pi, iteration, residual};
    for (std::size_t j = 0; j < k; ++j) pi[j] = 0.5 * (pi[j] + next[j]);
    normalize(pi);
  }
  left_multiply(m, pi, next);
  residual = 0.0;
  for (std::size_t j = 0; j < k; ++j) residual += std::abs(next[j] - pi[j]);
  if (residual <= config.tolerance) return {pi, config.max_iterations, residual};
  throw ConvergenceError(config.max_iterations, residual);
}

namespace {

const SchemaEdge& checked_edge(const SchemaGraph& schema, const AttributeCandidate& c) {
  if (c.edge >= schema.edge_count()) throw GraphError("unknown relationship type");
  const SchemaEdge& e = schema.edge(c.edge);
  const std::size_t anchor = c.direction == Direction::kOutgoing ? e.source : e.target;
  if (anchor != c.key) {
    throw GraphError("relationship type '" + e.id + "' is not " +
                     std::string(to_string(c.direction)) + " for the key type");
  }
  return e;
}

}  // namespace

std::uint64_t nonkey_coverage(const EntityGraph& graph, const SchemaGraph& schema,
                              const AttributeCandidate& candidate) {
  const SchemaEdge& e = checked_edge(schema, candidate);
  return graph.instances(e.origin).size();
}

double nonkey_entropy(const EntityGraph& graph, const SchemaGraph& schema,
                      const AttributeCandidate& candidate) {
  const SchemaEdge& e = checked_edge(schema, candidate);
  const bool outgoing = candidate.direction == Direction::kOutgoing;

  // Cell value of every key entity with a non-empty cell.
  std::map<EntityId, std::vector<EntityId>> cells;
  for (const Edge& edge : graph.instances(e.origin)) {
    const EntityId key = outgoing ? edge.source : edge.target;
    cells[key].push_back(outgoing ? edge.target : edge.source);
  }
  std::map<std::vector<EntityId>, std::size_t> groups;
  for (auto& [key, values] : cells) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    ++groups[values];
  }

  const double m = static_cast<double>(cells.size());
  double h = 0.0;
  for (const auto& [values, count] : groups) {
    const double n = static_cast<double>(count);
    h += (n / m) * std::log10(m / n);
  }
  return h;
}

double table_score(double key_score, std::span<const double> nonkey_scores) {
  if (nonkey_scores.empty()) throw ScoringError("a preview table needs a non-key attribute");
  return key_score * std::accumulate(nonkey_scores.begin(), nonkey_scores.end(), 0.0);
}

double preview_score(std::span<const double> table_scores) {
  return std::accumulate(table_scores.begin(), table_scores.end(), 0.0);
}

ScoredSchema::ScoredSchema(SchemaGraph schema, std::vector<double> key_scores,
                           std::vector<std::vector<double>> nonkey_scores)
    : schema_(std::move(schema)), distances_(schema_), key_scores_(std::move(key_scores)) {
  const std::size_t k = schema_.vertex_count();
  if (key_scores_.size() != k || nonkey_scores.size() != k) {
    throw ScoringError("score vectors do not match the schema graph");
  }
  auto valid = [](double s) { return std::isfinite(s) && s >= 0.0; };
  ranked_.resize(k);
  for (std::size_t t = 0; t < k; ++t) {
    if (!valid(key_scores_[t])) {
      throw ScoringError("key score of '" + schema_.vertex(t).id + "' is not finite and >= 0");
    }
    const auto candidates = incident_candidates(schema_, t);
    if (candidates.size() != nonkey_scores[t].size()) {
      throw ScoringError("non-key scores of '" + schema_.vertex(t).id +
                         "' do not match its incident relationship types");
    }
    auto& list = ranked_[t];
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (!valid(nonkey_scores[t][c])) {
        throw ScoringError("non-key score is not finite and >= 0");
      }
      list.push_back({candidates[c], nonkey_scores[t][c]});
    }
    std::stable_sort(list.begin(), list.end(),
                     [](const RankedCandidate& a, const RankedCandidate& b) {
                       if (a.score != b.score) return a.score > b.score;
                       return a.candidate < b.candidate;
                     });
  }
}

double ScoredSchema::key_score(std::size_t key) const {
  if (key >= key_scores_.size()) throw GraphError("unknown schema vertex");
  return key_scores_[key];
}

std::span<const RankedCandidate> ScoredSchema::ranked(std::size_t key) const {
  if (key >= ranked_.size()) throw GraphError("unknown schema vertex");
  return ranked_[key];
}

double ScoredSchema::nonkey_score(const AttributeCandidate& candidate) const {
  for (const auto& r : ranked(candidate.key)) {
    if (r.candidate == candidate) return r.score;
  }
  throw GraphError("candidate is not incident on its key type");
}

ScoredSchema build_scored_schema(const EntityGraph& graph, const SchemaGraph& schema,
                                 KeyMeasure key_measure, NonKeyMeasure nonkey_measure,
                                 const RandomWalkConfig& config) {
  const std::size_t k = schema.vertex_count();
  std::vector<double> keys(k, 0.0);
  if (k > 0) {
    if (key_measure == KeyMeasure::kCoverage) {
      for (std::size_t t = 0; t < k; ++t) {
        keys[t] = static_cast<double>(key_coverage(graph, schema.vertex(t).origin));
      }
    } else {
      keys = random_walk_scores(schema, config).probabilities;
    }
  }

  std::vector<std::vector<double>> nonkeys(k);
  for (std::size_t t = 0; t < k; ++t) {
    for (const auto& c : incident_candidates(schema, t)) {
      nonkeys[t].push_back(nonkey_measure == NonKeyMeasure::kCoverage
                               ? static_cast<double>(nonkey_coverage(graph, schema, c))
                               : nonkey_entropy(graph, schema, c));
    }
  }
  return ScoredSchema(schema, std::move(keys), std::move(nonkeys));
}

}  // namespace egpreview
