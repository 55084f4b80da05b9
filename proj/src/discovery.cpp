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

#include "egpreview/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace egpreview {

namespace {

using Kind = DiscoveryError::Kind;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Scores reached through different summation orders may differ in the last
// bits; anything this close counts as a tie.
constexpr double kTieTolerance = 1e-12;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

bool clearly_greater(double a, double b) {
  return a - b > kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

// Flattened per-type candidate data for the inner allocation loop.
class Allocator {
 public:
  Allocator(const ScoredSchema& scored, GainOrder order) {
    const std::size_t k = scored.type_count();
    types_.resize(k);
    for (std::size_t t = 0; t < k; ++t) {
      Lists& lists = types_[t];
      lists.key = scored.key_score(t);
      lists.prefix.push_back(0.0);
      for (const auto& r : scored.ranked(t)) {
        lists.gain.push_back(order == GainOrder::kKeyWeighted ? lists.key * r.score : r.score);
        lists.value.push_back(lists.key * r.score);
        lists.tie.push_back(static_cast<std::uint32_t>(r.candidate.edge * 2 +
                                                       static_cast<std::size_t>(r.candidate.direction)));
        lists.prefix.push_back(lists.prefix.back() + r.score);
      }
    }
  }

  bool eligible(std::size_t t) const { return !types_[t].gain.empty(); }
  std::size_t length(std::size_t t) const { return types_[t].gain.size(); }
  double gain(std::size_t t, std::size_t i) const { return types_[t].gain[i]; }
  std::uint32_t tie(std::size_t t, std::size_t i) const { return types_[t].tie[i]; }
  double value(std::size_t t, std::size_t i) const { return types_[t].value[i]; }

  // key(t) * (sum of the top-m non-key scores); same value as table_score().
  double table_value(std::size_t t, std::size_t m) const {
    return types_[t].key * types_[t].prefix[m];
  }

  // Fills counts[i] for subset[i]; returns the preview score, or -inf when
  // some key has no candidates.
  double allocate(const std::size_t* subset, std::size_t k, std::size_t n,
                  std::uint32_t* counts) const {
    for (std::size_t i = 0; i < k; ++i) {
      if (types_[subset[i]].gain.empty()) return kNegInf;
      counts[i] = 1;
    }
    for (std::size_t slot = k; slot < n; ++slot) {
      std::size_t pick = k;
      double pick_gain = 0.0;
      std::uint32_t pick_tie = 0;
      for (std::size_t i = 0; i < k; ++i) {
        const Lists& lists = types_[subset[i]];
        const std::uint32_t c = counts[i];
        if (c >= lists.gain.size()) continue;
        const double g = lists.gain[c];
        const std::uint32_t tie = lists.tie[c];
        if (pick == k || g > pick_gain || (g == pick_gain && tie < pick_tie)) {
          pick = i;
          pick_gain = g;
          pick_tie = tie;
        }
      }
      if (pick == k) break;
      ++counts[pick];
    }
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) total += table_value(subset[i], counts[i]);
    return total;
  }

 private:
  struct Lists {
    double key = 0.0;
    std::vector<double> gain;
    std::vector<std::uint32_t> tie;
    std::vector<double> value;  // key * score
    std::vector<double> prefix;
  };
  std::vector<Lists> types_;
};

Preview make_preview(const ScoredSchema& scored, std::span<const std::size_t> subset,
                     std::span<const std::uint32_t> counts) {
  Preview p;
  std::vector<double> table_scores;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    PreviewTable table;
    table.key = subset[i];
    const auto ranked = scored.ranked(subset[i]);
    table.nonkeys.assign(ranked.begin(), ranked.begin() + counts[i]);
    std::vector<double> scores;
    for (const auto& r : table.nonkeys) scores.push_back(r.score);
    table.score = table_score(scored.key_score(table.key), scores);
    table_scores.push_back(table.score);
    p.tables.push_back(std::move(table));
  }
  p.total_score = preview_score(table_scores);
  return p;
}

std::vector<std::size_t> eligible_types(const ScoredSchema& scored) {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < scored.type_count(); ++t) {
    if (!scored.ranked(t).empty()) out.push_back(t);
  }
  return out;
}

void check_type_count(const ScoredSchema& scored, std::size_t k) {
  if (scored.type_count() < k) {
    throw DiscoveryError(Kind::kInfeasible, "requested " + std::to_string(k) +
                                             " tables but the schema has only " +
                                             std::to_string(scored.type_count()) +
                                             " entity types");
  }
}

bool pair_ok(const DistanceIndex& distances, std::size_t a, std::size_t b, PreviewMode mode,
             std::uint32_t d) {
  return mode == PreviewMode::kTight ? distances.within(a, b, d) : distances.apart(a, b, d);
}

// Visits every k-subset of `pool` in lexicographic order.
template <typename Visit>
void for_each_combination(std::span<const std::size_t> pool, std::size_t k, Visit&& visit) {
  const std::size_t m = pool.size();
  if (k == 0 || k > m) return;
  std::vector<std::size_t> pos(k);
  std::vector<std::size_t> subset(k);
  for (std::size_t i = 0; i < k; ++i) {
    pos[i] = i;
    subset[i] = pool[i];
  }
  while (true) {
    visit(std::span<const std::size_t>(subset));
    std::size_t i = k;
    while (i > 0 && pos[i - 1] == m - k + (i - 1)) --i;
    if (i == 0) return;
    ++pos[i - 1];
    subset[i - 1] = pool[pos[i - 1]];
    for (std::size_t j = i; j < k; ++j) {
      pos[j] = pos[j - 1] + 1;
      subset[j] = pool[pos[j]];
    }
  }
}

// Tracks the best subset seen so far under the shared tie-break. Subsets
// must be offered in lexicographic order.
class BestSubset {
 public:
  explicit BestSubset(bool keep_ties) : keep_ties_(keep_ties) {}

  void offer(std::span<const std::size_t> subset, double score) {
    if (score == kNegInf) return;
    if (best_.empty() || clearly_greater(score, score_)) {
      score_ = score;
      best_.assign(1, TypeSubset(subset.begin(), subset.end()));
    } else if (keep_ties_ && nearly_equal(score, score_)) {
      best_.emplace_back(subset.begin(), subset.end());
    }
  }

  bool empty() const { return best_.empty(); }
  const std::vector<TypeSubset>& subsets() const { return best_; }

 private:
  bool keep_ties_;
  double score_ = kNegInf;
  std::vector<TypeSubset> best_;
};

// Exhaustive search over every k-subset of `pool` without a distance
// filter. Leaves are visited in lexicographic order like
// for_each_combination, but each prefix carries the top n - k leftover
// gains of its tables, so a subset's optimal score costs one merge of at
// most 2(n - k) entries rather than a fresh allocation. Every table keeps
// its top column; the leftover slots hold the largest remaining gains,
// which is exactly what the greedy allocation computes.
class ConciseSearch {
 public:
  ConciseSearch(const Allocator& allocator, std::span<const std::size_t> pool, std::size_t k,
                std::size_t n, BestSubset& best)
      : allocator_(allocator),
        pool_(pool),
        k_(k),
        slots_(n - k),
        best_(best),
        subset_(k),
        buffers_(k + 1),
        bases_(k + 1, 0.0) {
    for (auto& b : buffers_) b.reserve(slots_);
  }

  void run() {
    if (k_ <= pool_.size()) visit(0, 0);
  }

 private:
  struct Gain {
    double order;
    std::uint32_t tie;
    std::uint32_t slot;  // subset position, the greedy's last tie-break
    double value;
  };

  static bool before(const Gain& a, const Gain& b) {
    if (a.order != b.order) return a.order > b.order;
    if (a.tie != b.tie) return a.tie < b.tie;
    return a.slot < b.slot;
  }

  void visit(std::size_t depth, std::size_t from) {
    for (std::size_t p = from; p + (k_ - depth) <= pool_.size(); ++p) {
      const std::size_t t = pool_[p];
      subset_[depth] = t;
      if (depth + 1 == k_) {
        best_.offer(subset_, leaf_score(depth, t));
      } else {
        extend(depth, t);
        visit(depth + 1, p + 1);
      }
    }
  }

  // Score of the prefix plus t: the same merge as extend(), summed only.
  double leaf_score(std::size_t depth, std::size_t t) const {
    const auto& parent = buffers_[depth];
    const std::size_t length = allocator_.length(t);
    const auto slot = static_cast<std::uint32_t>(depth);
    double sum = 0.0;
    std::size_t a = 0, b = 1, taken = 0;
    while (taken < slots_ && b < length && a < parent.size()) {
      const Gain& g = parent[a];
      const double order = allocator_.gain(t, b);
      const bool parent_first =
          g.order != order ? g.order > order
                           : (g.tie != allocator_.tie(t, b) ? g.tie < allocator_.tie(t, b)
                                                            : g.slot < slot);
      if (parent_first) {
        sum += g.value;
        ++a;
      } else {
        sum += allocator_.value(t, b);
        ++b;
      }
      ++taken;
    }
    for (; taken < slots_ && a < parent.size(); ++taken) sum += parent[a++].value;
    for (; taken < slots_ && b < length; ++taken) sum += allocator_.value(t, b++);
    return bases_[depth] + allocator_.table_value(t, 1) + sum;
  }

  // buffers_[depth + 1] = top slots_ of buffers_[depth] merged with t's
  // leftover gains.
  void extend(std::size_t depth, std::size_t t) {
    const auto& parent = buffers_[depth];
    auto& child = buffers_[depth + 1];
    child.clear();
    const std::size_t length = allocator_.length(t);
    std::size_t a = 0, b = 1;
    while (child.size() < slots_ && (a < parent.size() || b < length)) {
      Gain candidate;
      if (b < length) {
        candidate = {allocator_.gain(t, b), allocator_.tie(t, b),
                     static_cast<std::uint32_t>(depth), allocator_.value(t, b)};
      }
      if (b >= length || (a < parent.size() && before(parent[a], candidate))) {
        child.push_back(parent[a++]);
      } else {
        child.push_back(candidate);
        ++b;
      }
    }
    bases_[depth + 1] = bases_[depth] + allocator_.table_value(t, 1);
  }

  const Allocator& allocator_;
  std::span<const std::size_t> pool_;
  std::size_t k_;
  std::size_t slots_;
  BestSubset& best_;
  TypeSubset subset_;
  std::vector<std::vector<Gain>> buffers_;
  std::vector<double> bases_;
};

BestSubset search_subsets(const ScoredSchema& scored, const Constraints& c, GainOrder order,
                          bool keep_ties) {
  c.validate();
  check_type_count(scored, c.k);
  const Allocator allocator(scored, order);
  const auto pool = eligible_types(scored);
  BestSubset best(keep_ties);
  if (c.mode == PreviewMode::kConcise) {
    ConciseSearch(allocator, pool, c.k, c.n, best).run();
  } else {
    const DistanceIndex& distances = scored.distances();
    std::vector<std::uint32_t> counts(c.k);
    for_each_combination(pool, c.k, [&](std::span<const std::size_t> subset) {
      for (std::size_t i = 0; i < subset.size(); ++i) {
        for (std::size_t j = i + 1; j < subset.size(); ++j) {
          if (!pair_ok(distances, subset[i], subset[j], c.mode, *c.d)) return;
        }
      }
      best.offer(subset, allocator.allocate(subset.data(), subset.size(), c.n, counts.data()));
    });
  }
  if (best.empty()) {
    throw DiscoveryError(Kind::kInfeasible, "no set of " + std::to_string(c.k) +
                                                " entity types satisfies the constraints");
  }
  return best;
}

}  // namespace

std::string_view to_string(PreviewMode mode) {
  switch (mode) {
    case PreviewMode::kConcise:
      return "concise";
    case PreviewMode::kTight:
      return "tight";
    case PreviewMode::kDiverse:
      return "diverse";
  }
  return "concise";
}

std::optional<PreviewMode> parse_preview_mode(std::string_view text) {
  if (text == "concise") return PreviewMode::kConcise;
  if (text == "tight") return PreviewMode::kTight;
  if (text == "diverse") return PreviewMode::kDiverse;
  return std::nullopt;
}

void Constraints::validate() const {
  if (k == 0) throw DiscoveryError(Kind::kInvalid, "k must be positive");
  if (n < k) {
    throw DiscoveryError(Kind::kInvalid, "n must be at least k (every table needs a column)");
  }
  if (mode == PreviewMode::kConcise) {
    if (d) throw DiscoveryError(Kind::kInvalid, "a distance bound requires tight or diverse mode");
  } else if (!d || *d == 0) {
    throw DiscoveryError(Kind::kInvalid,
                         std::string(to_string(mode)) + " mode requires a distance d >= 1");
  }
}

std::vector<std::size_t> Preview::keys() const {
  std::vector<std::size_t> out;
  for (const auto& t : tables) out.push_back(t.key);
  return out;
}

std::size_t Preview::column_count() const {
  std::size_t total = 0;
  for (const auto& t : tables) total += t.nonkeys.size();
  return total;
}

bool satisfies_distance(const DistanceIndex& distances, std::span<const std::size_t> keys,
                        const Constraints& constraints) {
  if (constraints.mode == PreviewMode::kConcise) return true;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t j = i + 1; j < keys.size(); ++j) {
      if (!pair_ok(distances, keys[i], keys[j], constraints.mode, *constraints.d)) return false;
    }
  }
  return true;
}

Preview compute_preview_for_subset(const ScoredSchema& scored, std::span<const std::size_t> subset,
                                   std::size_t n, GainOrder order) {
  TypeSubset keys(subset.begin(), subset.end());
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw DiscoveryError(Kind::kInvalid, "key types of a preview must be distinct");
  }
  if (n < keys.size()) throw DiscoveryError(Kind::kInvalid, "n must be at least the subset size");
  for (std::size_t t : keys) {
    if (t >= scored.type_count()) throw DiscoveryError(Kind::kInvalid, "unknown entity type");
    if (scored.ranked(t).empty()) {
      throw DiscoveryError(Kind::kInfeasible, "entity type '" + scored.schema().vertex(t).id +
                                                  "' has no relationship types to show");
    }
  }
  const Allocator allocator(scored, order);
  std::vector<std::uint32_t> counts(keys.size());
  allocator.allocate(keys.data(), keys.size(), n, counts.data());
  return make_preview(scored, keys, counts);
}

Preview brute_force(const ScoredSchema& scored, const Constraints& constraints, GainOrder order) {
  const auto best = search_subsets(scored, constraints, order, false);
  return compute_preview_for_subset(scored, best.subsets().front(), constraints.n, order);
}

std::vector<Preview> all_optimal_previews(const ScoredSchema& scored,
                                          const Constraints& constraints, GainOrder order) {
  const auto best = search_subsets(scored, constraints, order, true);
  std::vector<Preview> out;
  for (const auto& subset : best.subsets()) {
    out.push_back(compute_preview_for_subset(scored, subset, constraints.n, order));
  }
  return out;
}

Preview dp_concise(const ScoredSchema& scored, std::size_t k, std::size_t n) {
  const Constraints constraints{k, n, PreviewMode::kConcise, std::nullopt};
  constraints.validate();
  check_type_count(scored, k);
  const Allocator allocator(scored, GainOrder::kKeyWeighted);
  const std::size_t types = scored.type_count();

  // Types are visited in descending id order, so the last position holds the
  // smallest id. Backtracking from the end can then favour small ids first,
  // which yields the lexicographically smallest optimal key set.
  auto type_at = [&](std::size_t x) { return types - x; };  // x in [1, types]

  // best(x, j, b): top score using j tables and at most b columns among the
  // first x types in visiting order.
  const std::size_t stride_j = n + 1;
  const std::size_t stride_x = (k + 1) * stride_j;
  std::vector<double> best((types + 1) * stride_x, kNegInf);
  auto at = [&](std::size_t x, std::size_t j, std::size_t b) -> double& {
    return best[x * stride_x + j * stride_j + b];
  };

  for (std::size_t b = 0; b <= n; ++b) at(0, 0, b) = 0.0;
  for (std::size_t x = 1; x <= types; ++x) {
    const std::size_t t = type_at(x);
    const std::size_t length = allocator.length(t);
    for (std::size_t b = 0; b <= n; ++b) at(x, 0, b) = 0.0;
    for (std::size_t j = 1; j <= std::min(k, x); ++j) {
      for (std::size_t b = j; b <= n; ++b) {
        double value = at(x - 1, j, b);  // skip this type
        const std::size_t most = std::min(b - (j - 1), length);
        for (std::size_t m = 1; m <= most; ++m) {
          const double rest = at(x - 1, j - 1, b - m);
          if (rest == kNegInf) continue;
          value = std::max(value, rest + allocator.table_value(t, m));
        }
        at(x, j, b) = value;
      }
    }
  }
  if (at(types, k, n) == kNegInf) {
    throw DiscoveryError(Kind::kInfeasible, "fewer than " + std::to_string(k) +
                                                " entity types have relationship types to show");
  }

  // Walk back from (types, k, n) keeping every budget that lies on some
  // optimal path; take a type whenever any of those paths can take it.
  TypeSubset keys;
  std::vector<char> states(n + 1, 0), next(n + 1, 0);
  states[n] = 1;
  std::size_t j = k;
  for (std::size_t x = types; x >= 1 && j > 0; --x) {
    const std::size_t t = type_at(x);
    const std::size_t length = allocator.length(t);
    std::fill(next.begin(), next.end(), 0);
    bool take = false;
    for (std::size_t b = 0; b <= n; ++b) {
      if (!states[b]) continue;
      const double target = at(x, j, b);
      const std::size_t most = b + 1 >= j ? std::min(b - (j - 1), length) : 0;
      for (std::size_t m = 1; m <= most; ++m) {
        const double rest = at(x - 1, j - 1, b - m);
        if (rest == kNegInf) continue;
        if (nearly_equal(rest + allocator.table_value(t, m), target)) {
          next[b - m] = 1;
          take = true;
        }
      }
    }
    if (take) {
      keys.push_back(t);
      --j;
    } else {
      for (std::size_t b = 0; b <= n; ++b) {
        if (states[b] && at(x - 1, j, b) != kNegInf && nearly_equal(at(x - 1, j, b), at(x, j, b))) {
          next[b] = 1;
        }
      }
    }
    states.swap(next);
  }
  std::sort(keys.begin(), keys.end());
  return compute_preview_for_subset(scored, keys, n);
}

std::vector<TypeSubset> enumerate_feasible_subsets(const DistanceIndex& distances,
                                                   std::span<const std::size_t> types,
                                                   std::size_t k, std::uint32_t d,
                                                   PreviewMode mode) {
  if (mode == PreviewMode::kConcise) {
    throw DiscoveryError(Kind::kInvalid, "subset enumeration needs tight or diverse mode");
  }
  if (k == 0) throw DiscoveryError(Kind::kInvalid, "k must be positive");
  if (!std::is_sorted(types.begin(), types.end()) ||
      std::adjacent_find(types.begin(), types.end()) != types.end()) {
    throw DiscoveryError(Kind::kInvalid, "candidate types must be strictly ascending");
  }

  // Level i is a flat array of i-subsets, lexicographically sorted.
  std::vector<std::size_t> level(types.begin(), types.end());
  for (std::size_t width = 1; width < k && !level.empty(); ++width) {
    std::vector<std::size_t> joined;
    const std::size_t count = level.size() / width;
    std::size_t group = 0;
    while (group < count) {
      // Rows [group, end) share their first width-1 elements.
      std::size_t end = group + 1;
      while (end < count && std::equal(level.begin() + group * width,
                                       level.begin() + group * width + width - 1,
                                       level.begin() + end * width)) {
        ++end;
      }
      for (std::size_t a = group; a < end; ++a) {
        const std::size_t last_a = level[a * width + width - 1];
        for (std::size_t b = a + 1; b < end; ++b) {
          const std::size_t last_b = level[b * width + width - 1];
          if (!pair_ok(distances, last_a, last_b, mode, d)) continue;
          joined.insert(joined.end(), level.begin() + a * width, level.begin() + (a + 1) * width);
          joined.push_back(last_b);
        }
      }
      group = end;
    }
    level.swap(joined);
  }
  if (k > types.size()) level.clear();

  std::vector<TypeSubset> out;
  out.reserve(level.size() / k);
  for (std::size_t i = 0; i + k <= level.size(); i += k) {
    out.emplace_back(level.begin() + i, level.begin() + i + k);
  }
  return out;
}

Preview apriori_discover(const ScoredSchema& scored, const Constraints& constraints,
                         GainOrder order) {
  constraints.validate();
  if (constraints.mode == PreviewMode::kConcise) {
    throw DiscoveryError(Kind::kInvalid, "the level-wise solver handles tight or diverse previews");
  }
  check_type_count(scored, constraints.k);
  const auto pool = eligible_types(scored);
  const auto subsets =
      enumerate_feasible_subsets(scored.distances(), pool, constraints.k, *constraints.d,
                                 constraints.mode);
  const Allocator allocator(scored, order);
  std::vector<std::uint32_t> counts(constraints.k);
  BestSubset best(false);
  for (const auto& subset : subsets) {
    best.offer(subset, allocator.allocate(subset.data(), subset.size(), constraints.n,
                                          counts.data()));
  }
  if (best.empty()) {
    throw DiscoveryError(Kind::kInfeasible,
                         "no set of " + std::to_string(constraints.k) +
                             " entity types satisfies the distance constraint");
  }
  return compute_preview_for_subset(scored, best.subsets().front(), constraints.n, order);
}

}  // namespace egpreview
