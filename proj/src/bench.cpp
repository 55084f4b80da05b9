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

#include "egpreview/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numeric>
#include <ostream>
#include <string>

#include "egpreview/random.hpp"
#include "egpreview/schema.hpp"

namespace egpreview {

namespace {

// Zipf-weighted choice over [0, size) whose popularity ranks are a seeded
// permutation, so hubs do not always sit at the smallest ids.
class ZipfPicker {
 public:
  ZipfPicker(std::size_t size, double skew, Rng& rng) : rank_of_(size), cumulative_(size) {
    std::iota(rank_of_.begin(), rank_of_.end(), std::size_t{0});
    for (std::size_t i = size; i > 1; --i) {
      std::swap(rank_of_[i - 1], rank_of_[uniform_below(rng, i)]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      total += 1.0 / std::pow(static_cast<double>(rank_of_[i] + 1), skew);
      cumulative_[i] = total;
    }
  }

  std::size_t pick(Rng& rng) const {
    const double u = uniform_unit(rng) * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
  }

 private:
  std::vector<std::size_t> rank_of_;
  std::vector<double> cumulative_;
};

std::string padded(char prefix, std::size_t value, std::size_t limit) {
  const int width = static_cast<int>(std::to_string(std::max<std::size_t>(limit, 1) - 1).size());
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%c%0*zu", prefix, width, value);
  return buffer;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (types == 0) throw BenchError("a synthetic graph needs at least one entity type");
  if (entities < types) throw BenchError("every entity type needs an entity: entities < types");
  if (edges < relations) {
    throw BenchError("every relationship type needs an instance: edges < relations");
  }
  if (!std::isfinite(skew) || skew < 0.0) throw BenchError("skew must be finite and >= 0");
}

EntityGraph generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(splitmix64(spec.seed));
  const ZipfPicker type_picker(spec.types, spec.skew, rng);

  EntityGraphBuilder builder;
  std::vector<std::string> type_ids;
  for (std::size_t t = 0; t < spec.types; ++t) {
    type_ids.push_back(padded('t', t, spec.types));
    builder.add_type(type_ids.back(), "Type " + std::to_string(t));
  }

  std::vector<std::pair<std::size_t, std::size_t>> endpoints;
  std::vector<std::string> relation_ids;
  for (std::size_t r = 0; r < spec.relations; ++r) {
    const std::size_t source = type_picker.pick(rng);
    std::size_t target = type_picker.pick(rng);
    while (spec.types > 1 && target == source) target = type_picker.pick(rng);
    endpoints.emplace_back(source, target);
    relation_ids.push_back(padded('r', r, spec.relations));
    builder.add_relation(relation_ids.back(), "Relation " + std::to_string(r), type_ids[source],
                         type_ids[target]);
  }

  std::vector<std::vector<std::string>> members(spec.types);
  for (std::size_t e = 0; e < spec.entities; ++e) {
    const std::size_t type = e < spec.types ? e : type_picker.pick(rng);
    std::string id = padded('e', e, spec.entities);
    builder.add_entity(id, "Entity " + std::to_string(e), {type_ids[type]});
    members[type].push_back(std::move(id));
  }

  if (spec.relations > 0) {
    const ZipfPicker relation_picker(spec.relations, spec.skew, rng);
    for (std::size_t i = 0; i < spec.edges; ++i) {
      const std::size_t r = i < spec.relations ? i : relation_picker.pick(rng);
      const auto& sources = members[endpoints[r].first];
      const auto& targets = members[endpoints[r].second];
      const std::string& source = sources[uniform_below(rng, sources.size())];
      const std::string& target = targets[uniform_below(rng, targets.size())];
      builder.add_edge(relation_ids[r], source, target);
    }
  }
  return builder.build();
}

std::string_view to_string(Solver solver) {
  switch (solver) {
    case Solver::kBruteForce:
      return "brute";
    case Solver::kDynamicProgram:
      return "dp";
    case Solver::kApriori:
      return "apriori";
  }
  return "brute";
}

namespace {

Preview run_solver(const ScoredSchema& scored, const Constraints& c, Solver solver) {
  switch (solver) {
    case Solver::kBruteForce:
      return brute_force(scored, c);
    case Solver::kDynamicProgram:
      if (c.mode != PreviewMode::kConcise) {
        throw DiscoveryError(DiscoveryError::Kind::kInvalid,
                             "the dynamic program handles concise previews only");
      }
      return dp_concise(scored, c.k, c.n);
    case Solver::kApriori:
      return apriori_discover(scored, c);
  }
  return brute_force(scored, c);
}

}  // namespace

std::vector<TimingRow> time_solvers(const ScoredSchema& scored,
                                    std::span<const Constraints> grid,
                                    std::size_t repetitions) {
  if (repetitions == 0) throw BenchError("repetitions must be positive");
  std::vector<TimingRow> rows;
  for (const Constraints& c : grid) {
    const Solver fast =
        c.mode == PreviewMode::kConcise ? Solver::kDynamicProgram : Solver::kApriori;
    for (Solver solver : {Solver::kBruteForce, fast}) {
      TimingRow row;
      row.types = scored.type_count();
      row.relations = scored.schema().edge_count();
      row.constraints = c;
      row.solver = solver;
      row.status = "ok";
      double elapsed = 0.0;
      for (std::size_t rep = 0; rep < repetitions; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        try {
          row.total_score = run_solver(scored, c, solver).total_score;
        } catch (const std::exception& e) {
          row.status = e.what();
          break;
        }
        const auto stop = std::chrono::steady_clock::now();
        elapsed += std::chrono::duration<double, std::milli>(stop - start).count();
      }
      row.ms = row.status == "ok" ? elapsed / static_cast<double>(repetitions) : 0.0;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<TimingRow> time_solvers(const EntityGraph& graph, std::span<const Constraints> grid,
                                    std::size_t repetitions) {
  const SchemaGraph schema = derive_schema_graph(graph);
  const ScoredSchema scored =
      build_scored_schema(graph, schema, KeyMeasure::kCoverage, NonKeyMeasure::kCoverage);
  return time_solvers(scored, grid, repetitions);
}

namespace {

// RFC 4180 quoting for free-text fields.
std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

}  // namespace

void write_timing_csv(std::ostream& out, std::span<const TimingRow> rows) {
  out << "K,N,k,n,d,mode,algorithm,ms,status\n";
  char ms[64];
  for (const TimingRow& row : rows) {
    std::snprintf(ms, sizeof ms, "%.3f", row.ms);
    out << row.types << ',' << row.relations << ',' << row.constraints.k << ','
        << row.constraints.n << ',';
    if (row.constraints.d) out << *row.constraints.d;
    out << ',' << to_string(row.constraints.mode) << ',' << to_string(row.solver) << ',' << ms
        << ',' << csv_field(row.status) << '\n';
  }
}

}  // namespace egpreview
