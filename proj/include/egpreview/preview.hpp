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

// Filling preview tables with sample tuples and rendering them.

#ifndef EGPREVIEW_PREVIEW_HPP_
#define EGPREVIEW_PREVIEW_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "egpreview/discovery.hpp"
#include "egpreview/graph.hpp"
#include "egpreview/scoring.hpp"

namespace egpreview {

class PreviewError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MaterializedRow {
  std::string key;                              // key entity name
  std::vector<std::vector<std::string>> cells;  // one sorted value set per column

  friend bool operator==(const MaterializedRow&, const MaterializedRow&) = default;
};

struct MaterializedTable {
  std::string key_label;
  std::vector<std::string> column_labels;  // "Label", or "← Label" for incoming
  std::vector<MaterializedRow> rows;       // ascending key entity id

  friend bool operator==(const MaterializedTable&, const MaterializedTable&) = default;
};

// Draws min(sample_size, population) distinct key entities uniformly
// without replacement (partial Fisher-Yates on mt19937_64 driven by `seed`)
// and fills each cell with the entity's neighbours along the column's
// relationship type and direction. Throws PreviewError for sample_size 0 or
// a key type without entities.
MaterializedTable materialize(const EntityGraph& graph, const ScoredSchema& scored,
                              const PreviewTable& table, std::size_t sample_size,
                              std::uint64_t seed);

// Materializes every table; table i uses a seed derived from (seed, i).
std::vector<MaterializedTable> materialize_preview(const EntityGraph& graph,
                                                   const ScoredSchema& scored,
                                                   const Preview& preview,
                                                   std::size_t sample_size, std::uint64_t seed);

std::string column_label(const ScoredSchema& scored, const AttributeCandidate& candidate);

enum class OutputFormat { kJson, kMarkdown };

std::string_view to_string(OutputFormat format);
std::optional<OutputFormat> parse_output_format(std::string_view text);

// Settings echoed into the rendered output.
struct RenderContext {
  Constraints constraints;
  KeyMeasure key_measure = KeyMeasure::kCoverage;
  NonKeyMeasure nonkey_measure = NonKeyMeasure::kCoverage;
};

// Rounds to six significant digits, the precision of every rendered score.
double round_score(double value);

// `tables` must correspond 1:1 to preview.tables; throws PreviewError
// otherwise. JSON output is a single line-terminated document; Markdown
// output has one pipe table per preview table, key column first and bold,
// multi-valued cells as {a, b}, empty cells as "-".
std::string render_json(const ScoredSchema& scored, const Preview& preview,
                        std::span<const MaterializedTable> tables, const RenderContext& context);
std::string render_markdown(const ScoredSchema& scored, const Preview& preview,
                            std::span<const MaterializedTable> tables,
                            const RenderContext& context);
std::string render(const ScoredSchema& scored, const Preview& preview,
                   std::span<const MaterializedTable> tables, const RenderContext& context,
                   OutputFormat format);

}  // namespace egpreview

#endif  // EGPREVIEW_PREVIEW_HPP_
