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

// Optimal preview discovery.
//
// A preview picks k distinct key types and gives each at least one non-key
// column, using at most n columns overall. Tight previews additionally
// require every pair of keys to be within distance d in the schema graph;
// diverse previews require every pair to be at least d apart.
//
// Within a table the best columns are always a prefix of the key's ranked
// candidate list, so a preview is fully described by its key set and one
// column count per key. Three exact solvers are provided:
//
//   brute_force        every k-subset of types, optionally distance-filtered
//   dp_concise         dynamic program over (tables, budget, type prefix);
//                      concise previews only
//   apriori_discover   level-wise join of distance-compatible subsets
//                      followed by the same per-subset allocation
//
// All solvers break ties the same way: highest score, then the
// lexicographically smallest sorted key-id tuple, then candidate id order
// inside the allocation. They therefore return identical previews.

#ifndef EGPREVIEW_DISCOVERY_HPP_
#define EGPREVIEW_DISCOVERY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "egpreview/schema.hpp"
#include "egpreview/scoring.hpp"

namespace egpreview {

enum class PreviewMode { kConcise, kTight, kDiverse };

std::string_view to_string(PreviewMode mode);
std::optional<PreviewMode> parse_preview_mode(std::string_view text);

struct Constraints {
  std::size_t k = 1;  // tables
  std::size_t n = 1;  // total non-key columns, n >= k
  PreviewMode mode = PreviewMode::kConcise;
  std::optional<std::uint32_t> d;  // required iff mode != kConcise

  // Throws DiscoveryError(kInvalid) when the invariants above fail.
  void validate() const;
};

// How the allocator ranks leftover columns across tables. kKeyWeighted uses
// the column's actual contribution key(t) * nonkey(c) and is optimal;
// kRawScore ranks by nonkey(c) alone and exists for comparison only.
enum class GainOrder { kKeyWeighted, kRawScore };

struct PreviewTable {
  std::size_t key = 0;                   // schema vertex position
  std::vector<RankedCandidate> nonkeys;  // prefix of scored.ranked(key)
  double score = 0.0;
};

struct Preview {
  std::vector<PreviewTable> tables;  // ascending key position
  double total_score = 0.0;

  std::vector<std::size_t> keys() const;
  std::size_t column_count() const;
};

class DiscoveryError : public std::runtime_error {
 public:
  enum class Kind { kInvalid, kInfeasible };
  DiscoveryError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

using TypeSubset = std::vector<std::size_t>;

// Best preview whose keys are exactly `subset` within a budget of n columns.
// Every table receives its top candidate, then the remaining n - k slots go
// to the largest remaining gains across all tables. Tables whose candidates
// run out simply stop growing. Throws DiscoveryError when a key has no
// candidates, the subset has duplicates, or n < |subset|.
Preview compute_preview_for_subset(const ScoredSchema& scored, std::span<const std::size_t> subset,
                                   std::size_t n, GainOrder order = GainOrder::kKeyWeighted);

Preview brute_force(const ScoredSchema& scored, const Constraints& constraints,
                    GainOrder order = GainOrder::kKeyWeighted);

// Every key set attaining the optimum, each with its canonical allocation,
// in lexicographic key order.
std::vector<Preview> all_optimal_previews(const ScoredSchema& scored,
                                          const Constraints& constraints,
                                          GainOrder order = GainOrder::kKeyWeighted);

Preview dp_concise(const ScoredSchema& scored, std::size_t k, std::size_t n);

// All k-subsets of `types` (ascending positions) in which every pair
// satisfies the distance constraint, in lexicographic order. `mode` must be
// kTight or kDiverse.
std::vector<TypeSubset> enumerate_feasible_subsets(const DistanceIndex& distances,
                                                   std::span<const std::size_t> types,
                                                   std::size_t k, std::uint32_t d,
                                                   PreviewMode mode);

Preview apriori_discover(const ScoredSchema& scored, const Constraints& constraints,
                         GainOrder order = GainOrder::kKeyWeighted);

// True when every pair of keys satisfies the constraint's distance bound
// (always true for concise previews).
bool satisfies_distance(const DistanceIndex& distances, std::span<const std::size_t> keys,
                        const Constraints& constraints);

}  // namespace egpreview

#endif  // EGPREVIEW_DISCOVERY_HPP_
