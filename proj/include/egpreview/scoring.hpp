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

// Importance scores for candidate key attributes (entity types) and
// candidate non-key attributes (relationship types seen from a key type),
// and the table/preview scores built from them.
//
// A preview table keyed on type t with non-key columns c_1..c_m scores
//
//   key(t) * (nonkey(c_1) + ... + nonkey(c_m))
//
// and a preview scores the sum of its tables. Two measures are offered on
// each side:
//
//   key coverage       number of entities carrying the type
//   key random walk    stationary probability of the type under a walk on
//                      the weighted undirected schema graph, with a small
//                      teleport added between every pair of types so that
//                      disconnected schemas still have a unique answer
//   nonkey coverage    number of instances of the relationship type
//   nonkey entropy     base-10 entropy of the distribution of distinct
//                      value-sets the column takes over its non-empty cells

#ifndef EGPREVIEW_SCORING_HPP_
#define EGPREVIEW_SCORING_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "egpreview/graph.hpp"
#include "egpreview/schema.hpp"

namespace egpreview {

enum class KeyMeasure { kCoverage, kRandomWalk };
enum class NonKeyMeasure { kCoverage, kEntropy };

std::string_view to_string(KeyMeasure measure);
std::string_view to_string(NonKeyMeasure measure);
std::optional<KeyMeasure> parse_key_measure(std::string_view text);
std::optional<NonKeyMeasure> parse_nonkey_measure(std::string_view text);

class ScoringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public ScoringError {
 public:
  ConvergenceError(std::size_t iterations, double residual);
  std::size_t iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

struct RandomWalkConfig {
  double teleport = 1e-5;
  double tolerance = 1e-9;  // L1 bound on |pi M' - pi|
  std::size_t max_iterations = 10000;
};

// Square row-major matrix.
struct DenseMatrix {
  std::size_t size = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const { return values[i * size + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * size + j]; }
};

std::uint64_t key_coverage(const EntityGraph& graph, TypeId type);

// M_ij = w_ij / sum_{k != i} w_ik. Self-loops are ignored; rows of isolated
// types are all zero.
DenseMatrix transition_matrix(const SchemaGraph& schema);

// M' with `teleport` added to every off-diagonal entry and rows
// renormalized. Isolated rows become uniform over the other types.
DenseMatrix perturbed_transition_matrix(const SchemaGraph& schema, double teleport);

struct StationaryDistribution {
  std::vector<double> probabilities;  // indexed by schema vertex
  std::size_t iterations = 0;
  double residual = 0.0;  // |pi M' - pi|_1 at the returned pi
};

// Power iteration from the uniform vector. Throws ScoringError for an
// invalid config or empty schema, ConvergenceError when the residual stays
// above the tolerance after max_iterations.
StationaryDistribution random_walk_scores(const SchemaGraph& schema,
                                          const RandomWalkConfig& config = {});

// Instances of the candidate's relationship type; direction-independent.
std::uint64_t nonkey_coverage(const EntityGraph& graph, const SchemaGraph& schema,
                              const AttributeCandidate& candidate);

double nonkey_entropy(const EntityGraph& graph, const SchemaGraph& schema,
                      const AttributeCandidate& candidate);

// Throws ScoringError when `nonkeys` is empty.
double table_score(double key_score, std::span<const double> nonkey_scores);
double preview_score(std::span<const double> table_scores);

struct RankedCandidate {
  AttributeCandidate candidate;
  double score = 0.0;
};

// Precomputed scores for preview discovery. Candidate lists are sorted by
// descending score; ties fall back to edge position (id order), then
// outgoing before incoming.
class ScoredSchema {
 public:
  ScoredSchema() = default;
  // `nonkey_scores[t]` is aligned with incident_candidates(schema, t). All
  // scores must be finite and non-negative.
  ScoredSchema(SchemaGraph schema, std::vector<double> key_scores,
               std::vector<std::vector<double>> nonkey_scores);

  const SchemaGraph& schema() const { return schema_; }
  const DistanceIndex& distances() const { return distances_; }
  std::size_t type_count() const { return key_scores_.size(); }

  double key_score(std::size_t key) const;
  std::span<const double> key_scores() const { return key_scores_; }
  std::span<const RankedCandidate> ranked(std::size_t key) const;
  // Throws GraphError when the candidate is not incident on its key.
  double nonkey_score(const AttributeCandidate& candidate) const;

 private:
  SchemaGraph schema_;
  DistanceIndex distances_;
  std::vector<double> key_scores_;
  std::vector<std::vector<RankedCandidate>> ranked_;
};

ScoredSchema build_scored_schema(const EntityGraph& graph, const SchemaGraph& schema,
                                 KeyMeasure key_measure, NonKeyMeasure nonkey_measure,
                                 const RandomWalkConfig& config = {});

}  // namespace egpreview

#endif  // EGPREVIEW_SCORING_HPP_
