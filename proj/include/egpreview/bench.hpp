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

// Synthetic entity graphs and a wall-clock harness for the discovery
// solvers.

#ifndef EGPREVIEW_BENCH_HPP_
#define EGPREVIEW_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "egpreview/discovery.hpp"
#include "egpreview/graph.hpp"
#include "egpreview/scoring.hpp"

namespace egpreview {

class BenchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape of a synthetic graph. The realized schema has exactly `types`
// vertices and `relations` edges: every type gets at least one entity and
// every relationship type at least one instance. Endpoint types, entity
// types and edge relationship types are drawn from Zipf(skew) weights over
// their positions, so skew = 0 is uniform and larger values concentrate
// structure on a few hub types. Relationship types join two distinct types
// unless there is only one type.
struct SyntheticSpec {
  std::size_t types = 6;       // K
  std::size_t relations = 21;  // N
  std::size_t entities = 600;
  std::size_t edges = 3000;
  double skew = 0.5;
  std::uint64_t seed = 0;

  // Throws BenchError when the shape cannot be realized.
  void validate() const;
};

EntityGraph generate_synthetic(const SyntheticSpec& spec);

enum class Solver { kBruteForce, kDynamicProgram, kApriori };

std::string_view to_string(Solver solver);

struct TimingRow {
  std::size_t types = 0;
  std::size_t relations = 0;
  Constraints constraints;
  Solver solver = Solver::kBruteForce;
  double ms = 0.0;         // mean wall-clock over the successful repetitions
  double total_score = 0.0;
  std::string status;      // "ok" or the solver's error message
};

// Times every applicable solver on every configuration: brute force and the
// dynamic program for concise previews, brute force and the level-wise
// solver otherwise. Solver errors are recorded in `status`, never thrown.
// Runs strictly sequentially.
std::vector<TimingRow> time_solvers(const ScoredSchema& scored,
                                    std::span<const Constraints> grid,
                                    std::size_t repetitions);

// Scores `graph` with coverage/coverage and times it as above.
std::vector<TimingRow> time_solvers(const EntityGraph& graph,
                                    std::span<const Constraints> grid,
                                    std::size_t repetitions);

// Header: K,N,k,n,d,mode,algorithm,ms,status. `d` is empty for concise
// rows; `ms` has three decimals.
void write_timing_csv(std::ostream& out, std::span<const TimingRow> rows);

}  // namespace egpreview

#endif  // EGPREVIEW_BENCH_HPP_
