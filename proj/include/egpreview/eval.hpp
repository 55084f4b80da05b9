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

// Ranking-quality metrics for comparing ranked attributes against a gold
// standard.

#ifndef EGPREVIEW_EVAL_HPP_
#define EGPREVIEW_EVAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace egpreview {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// |top-K of `ranked` ∩ gold| / K. Lists shorter than K count the missing
// positions as misses.
template <typename T>
double precision_at_k(std::span<const T> ranked, const std::set<T>& gold, std::size_t k) {
  if (k == 0) throw MetricError("precision_at_k needs K >= 1");
  const std::size_t depth = std::min(k, ranked.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < depth; ++i) hits += gold.count(ranked[i]);
  return static_cast<double>(hits) / static_cast<double>(k);
}

template <typename T>
double precision_at_k(const std::vector<T>& ranked, const std::set<T>& gold, std::size_t k) {
  return precision_at_k(std::span<const T>(ranked), gold, k);
}

// Mean over the lists of 1 / (rank of the first gold item). A list with no
// gold item contributes 0. An empty input yields 0.
template <typename T>
double mean_reciprocal_rank(const std::vector<std::pair<std::vector<T>, std::set<T>>>& lists) {
  if (lists.empty()) return 0.0;
  double total = 0.0;
  for (const auto& [ranked, gold] : lists) {
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      if (gold.count(ranked[i])) {
        total += 1.0 / static_cast<double>(i + 1);
        break;
      }
    }
  }
  return total / static_cast<double>(lists.size());
}

// (E[XY] - E[X]E[Y]) / (sd(X) sd(Y)) with population moments, evaluated on
// mean-centred values (algebraically identical, without the cancellation of
// the one-pass sums). Throws MetricError for mismatched or too-short inputs
// and for constant inputs, whose variance is zero.
inline double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw MetricError("pearson_correlation needs equal-length inputs");
  if (x.size() < 2) throw MetricError("pearson_correlation needs at least two points");
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
  };
  if (constant(x) || constant(y)) {
    throw MetricError("pearson_correlation is undefined for zero variance");
  }
  const double count = static_cast<double>(x.size());
  double ex = 0.0, ey = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ex += x[i];
    ey += y[i];
  }
  ex /= count;
  ey /= count;
  double cov = 0.0, var_x = 0.0, var_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - ex, dy = y[i] - ey;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  const double r = (cov / count) / std::sqrt((var_x / count) * (var_y / count));
  return std::clamp(r, -1.0, 1.0);
}

inline double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson_correlation(std::span<const double>(x), std::span<const double>(y));
}

}  // namespace egpreview

#endif  // EGPREVIEW_EVAL_HPP_
