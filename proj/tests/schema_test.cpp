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

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace egpreview {
namespace {

class FixtureSchema : public ::testing::Test {
 protected:
  void SetUp() override {
    graph_ = load_entity_graph(testing::fixture_path());
    schema_ = derive_schema_graph(graph_);
  }
  std::size_t v(std::string_view id) const { return *schema_.find_vertex(id); }

  EntityGraph graph_;
  SchemaGraph schema_;
};

TEST_F(FixtureSchema, ShapeAndWeights) {
  EXPECT_EQ(schema_.vertex_count(), 6u);
  EXPECT_EQ(schema_.edge_count(), 7u);
  const std::size_t film = v("film");
  EXPECT_EQ(schema_.weight(film, v("film_actor")), 6u);
  EXPECT_EQ(schema_.weight(film, v("film_genre")), 5u);
  EXPECT_EQ(schema_.weight(film, v("film_director")), 4u);
  EXPECT_EQ(schema_.weight(film, v("film_producer")), 3u);
  EXPECT_EQ(schema_.weight(v("film_producer"), film), 3u);
  EXPECT_EQ(schema_.weight(film, v("award")), 0u);
}

TEST_F(FixtureSchema, FilmCandidates) {
  const auto candidates = incident_candidates(schema_, v("film"));
  ASSERT_EQ(candidates.size(), 5u);
  int incoming = 0;
  for (const auto& c : candidates) {
    const SchemaEdge& e = schema_.edge(c.edge);
    if (c.direction == Direction::kIncoming) {
      ++incoming;
      EXPECT_EQ(e.target, v("film"));
    } else {
      EXPECT_EQ(e.id, "genres");
    }
  }
  EXPECT_EQ(incoming, 4);
}

TEST_F(FixtureSchema, Distances) {
  const DistanceIndex d(schema_);
  EXPECT_EQ(d.between(v("film"), v("film_actor")), 1u);
  EXPECT_EQ(d.between(v("film"), v("award")), 2u);
  EXPECT_EQ(d.between(v("film_genre"), v("award")), 3u);
  EXPECT_EQ(d.diameter(), 3u);
  EXPECT_TRUE(d.within(v("film"), v("award"), 2));
  EXPECT_FALSE(d.within(v("film"), v("award"), 1));
  EXPECT_TRUE(d.apart(v("film"), v("award"), 2));
  EXPECT_FALSE(d.apart(v("film"), v("film_actor"), 2));
}

TEST(Schema, EmptyTypesAndUnusedRelationsAreDropped) {
  const EntityGraph g = parse_entity_graph(std::string_view(
      "ET a A\nET b B\nET c C\nRT r R a b\nRT unused U a c\nEN x X a\nEN y Y b\nED r x y\n"));
  const SchemaGraph s = derive_schema_graph(g);
  EXPECT_EQ(s.vertex_count(), 2u);
  EXPECT_EQ(s.edge_count(), 1u);
  EXPECT_EQ(s.edge(0).instances, 1u);
}

TEST(Schema, SelfLoopGivesTwoCandidates) {
  const SchemaGraph s({{"a", "A", {}}}, {{"r", "R", 0, 0, 3, {}}});
  const auto candidates = incident_candidates(s, 0);
  ASSERT_EQ(candidates.size(), 2u);
  EXPECT_EQ(candidates[0].direction, Direction::kOutgoing);
  EXPECT_EQ(candidates[1].direction, Direction::kIncoming);
  EXPECT_EQ(s.weight(0, 0), 3u);
}

TEST(Schema, RejectsDuplicatesAndBadEndpoints) {
  EXPECT_THROW(SchemaGraph({{"a", "A", {}}, {"a", "B", {}}}, {}), GraphError);
  EXPECT_THROW(SchemaGraph({{"a", "A", {}}}, {{"r", "R", 0, 1, 1, {}}}), GraphError);
  EXPECT_THROW(incident_candidates(SchemaGraph(), 0), GraphError);
}

TEST(Schema, CandidatesCoverEveryEndpointOnce) {
  Rng rng(3);
  for (int round = 0; round < 50; ++round) {
    const SchemaGraph s = testing::random_schema(rng, 6, 10);
    std::size_t total = 0;
    for (std::size_t t = 0; t < s.vertex_count(); ++t) {
      const auto candidates = incident_candidates(s, t);
      EXPECT_TRUE(std::is_sorted(candidates.begin(), candidates.end()));
      EXPECT_EQ(std::adjacent_find(candidates.begin(), candidates.end()), candidates.end());
      total += candidates.size();
    }
    EXPECT_EQ(total, 2 * s.edge_count());  // each edge seen from both ends
  }
}

TEST(Distance, MatchesFloydWarshall) {
  Rng rng(5);
  for (int round = 0; round < 200; ++round) {
    const std::size_t k = testing::draw(rng, 1, 12);
    const SchemaGraph s = testing::random_schema(rng, k, testing::draw(rng, 0, 2 * k));
    const auto oracle = testing::floyd_warshall(s);
    const DistanceIndex d = all_pairs_distance(s);
    int diameter = 0;
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const auto got = d.between(i, j);
        if (oracle[i][j] < 0) {
          EXPECT_FALSE(got.has_value());
          EXPECT_FALSE(d.within(i, j, 100));
          EXPECT_TRUE(d.apart(i, j, 100));
        } else {
          ASSERT_TRUE(got.has_value());
          EXPECT_EQ(static_cast<int>(*got), oracle[i][j]);
          diameter = std::max(diameter, oracle[i][j]);
        }
      }
    }
    EXPECT_EQ(static_cast<int>(d.diameter()), diameter);
  }
}

}  // namespace
}  // namespace egpreview
