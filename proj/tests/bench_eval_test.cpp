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

#include <gtest/gtest.h>

#include <set>
#include <sstream>
#include <string>

#include "egpreview/bench.hpp"
#include "egpreview/eval.hpp"
#include "test_support.hpp"

namespace egpreview {
namespace {

TEST(Synthetic, RealizesExactShape) {
  for (const auto& [k, n] : std::vector<std::pair<std::size_t, std::size_t>>{
           {6, 21}, {46, 133}, {1, 0}, {1, 3}, {2, 1}, {10, 0}}) {
    SyntheticSpec spec;
    spec.types = k;
    spec.relations = n;
    spec.entities = 5 * k + 3;
    spec.edges = 4 * n;
    spec.seed = k * 31 + n;
    const EntityGraph g = generate_synthetic(spec);
    const SchemaGraph s = derive_schema_graph(g);
    EXPECT_EQ(s.vertex_count(), k);
    EXPECT_EQ(s.edge_count(), n);
    EXPECT_EQ(g.entities().size(), spec.entities);
    EXPECT_EQ(g.edges().size(), spec.edges);
    for (const auto& e : s.edges()) {
      if (k > 1) EXPECT_NE(e.source, e.target);
    }
  }
}

TEST(Synthetic, SeedDeterministic) {
  SyntheticSpec spec{8, 20, 100, 400, 1.0, 5};
  EXPECT_EQ(generate_synthetic(spec), generate_synthetic(spec));
  std::ostringstream a, b;
  write_entity_graph(a, generate_synthetic(spec));
  spec.seed = 6;
  write_entity_graph(b, generate_synthetic(spec));
  EXPECT_NE(a.str(), b.str());
}

TEST(Synthetic, SkewConcentratesEdges) {
  auto top_share = [](double skew) {
    const EntityGraph g = generate_synthetic({10, 40, 200, 4000, skew, 3});
    std::vector<std::size_t> counts(g.relations().size());
    for (const Edge& e : g.edges()) ++counts[to_index(e.relation)];
    return static_cast<double>(*std::max_element(counts.begin(), counts.end())) / 4000.0;
  };
  EXPECT_GT(top_share(2.0), 2 * top_share(0.0));
}

TEST(Synthetic, RejectsInfeasibleSpecs) {
  EXPECT_THROW(generate_synthetic({0, 0, 1, 1, 0.5, 0}), BenchError);
  EXPECT_THROW(generate_synthetic({5, 2, 4, 10, 0.5, 0}), BenchError);
  EXPECT_THROW(generate_synthetic({5, 20, 10, 19, 0.5, 0}), BenchError);
  EXPECT_THROW(generate_synthetic({5, 2, 10, 10, -1.0, 0}), BenchError);
}

TEST(Timing, RowsPerSolverAndErrorsAreRecorded) {
  const EntityGraph g = generate_synthetic({8, 16, 80, 300, 0.5, 1});
  const std::vector<Constraints> grid{
      {3, 6, PreviewMode::kConcise, std::nullopt},
      {2, 5, PreviewMode::kTight, 2},
      {2, 4, PreviewMode::kDiverse, 50},  // nothing is that far apart
  };
  const auto rows = time_solvers(g, grid, 2);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].solver, Solver::kBruteForce);
  EXPECT_EQ(rows[1].solver, Solver::kDynamicProgram);
  EXPECT_EQ(rows[3].solver, Solver::kApriori);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(rows[i].status, "ok");
  EXPECT_EQ(rows[0].total_score, rows[1].total_score);
  EXPECT_EQ(rows[2].total_score, rows[3].total_score);
  EXPECT_NE(rows[4].status, "ok");
  EXPECT_NE(rows[5].status, "ok");
  EXPECT_EQ(rows[0].types, 8u);
  EXPECT_EQ(rows[0].relations, 16u);

  std::ostringstream csv;
  write_timing_csv(csv, rows);
  std::istringstream lines(csv.str());
  std::string header, first, third;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, third);
  std::getline(lines, third);
  EXPECT_EQ(header, "K,N,k,n,d,mode,algorithm,ms,status");
  EXPECT_EQ(first.rfind("8,16,3,6,,concise,brute,", 0), 0u) << first;
  EXPECT_EQ(third.rfind("8,16,2,5,2,tight,brute,", 0), 0u) << third;
  EXPECT_THROW(time_solvers(g, grid, 0), BenchError);
}

TEST(Metrics, PrecisionAtK) {
  const std::vector<std::string> ranked{"a", "b", "c", "d"};
  EXPECT_EQ(precision_at_k(ranked, std::set<std::string>{"a", "c"}, 2), 0.5);
  EXPECT_EQ(precision_at_k(ranked, std::set<std::string>{"a", "b", "z"}, 2), 1.0);
  std::vector<int> perfect;
  for (int i = 0; i < 10; ++i) perfect.push_back(i);
  EXPECT_EQ(precision_at_k(perfect, std::set<int>{0, 1, 2, 3, 4, 5}, 10), 0.6);
  EXPECT_EQ(precision_at_k(std::vector<int>{1}, std::set<int>{1}, 4), 0.25);
  EXPECT_THROW(precision_at_k(perfect, std::set<int>{}, 0), MetricError);
}

TEST(Metrics, MeanReciprocalRank) {
  using Lists = std::vector<std::pair<std::vector<int>, std::set<int>>>;
  EXPECT_EQ(mean_reciprocal_rank(Lists{{{7, 1, 2}, {7}}}), 1.0);
  EXPECT_EQ(mean_reciprocal_rank(Lists{{{1, 7}, {7}}, {{2, 7, 3}, {7, 3}}}), 0.5);
  EXPECT_EQ(mean_reciprocal_rank(Lists{{{1, 7}, {7}}, {{1, 2}, {9}}}), 0.25);
  EXPECT_EQ(mean_reciprocal_rank(Lists{}), 0.0);
}

TEST(Metrics, PearsonExamples) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_DOUBLE_EQ(pearson_correlation(x, std::vector<double>{5, 7, 9}), 1.0);
  EXPECT_DOUBLE_EQ(pearson_correlation(x, std::vector<double>{-1, -2, -3}), -1.0);
  EXPECT_DOUBLE_EQ(pearson_correlation(x, std::vector<double>{1, 3, 2}), 0.5);
  EXPECT_THROW(pearson_correlation(x, std::vector<double>{2, 2, 2}), MetricError);
  EXPECT_THROW(pearson_correlation(x, std::vector<double>{1, 2}), MetricError);
  EXPECT_THROW(pearson_correlation(std::vector<double>{1}, std::vector<double>{1}), MetricError);
}

TEST(Metrics, PearsonAffineInvariantAndBounded) {
  Rng rng(99);
  for (int round = 0; round < 100; ++round) {
    const std::size_t size = testing::draw(rng, 2, 50);
    std::vector<double> x(size), y(size), tx(size), ty(size);
    const double a = 0.1 + 10 * uniform_unit(rng), b = 200 * uniform_unit(rng) - 100;
    const double c = 0.1 + 10 * uniform_unit(rng), d = 200 * uniform_unit(rng) - 100;
    for (std::size_t i = 0; i < size; ++i) {
      x[i] = uniform_unit(rng);
      y[i] = uniform_unit(rng);
      tx[i] = a * x[i] + b;
      ty[i] = c * y[i] + d;
    }
    const double r = pearson_correlation(x, y);
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
    EXPECT_NEAR(pearson_correlation(tx, ty), r, 1e-9);
  }
}

}  // namespace
}  // namespace egpreview
