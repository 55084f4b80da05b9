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

#include "egpreview/preview.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "egpreview/random.hpp"
#include "json.hpp"

namespace egpreview {

namespace {

using Json = nlohmann::ordered_json;

const SchemaEdge& candidate_edge(const ScoredSchema& scored, const AttributeCandidate& c) {
  return scored.schema().edge(c.edge);
}

}  // namespace

std::string column_label(const ScoredSchema& scored, const AttributeCandidate& candidate) {
  const std::string& label = candidate_edge(scored, candidate).label;
  return candidate.direction == Direction::kIncoming ? "← " + label : label;
}

MaterializedTable materialize(const EntityGraph& graph, const ScoredSchema& scored,
                              const PreviewTable& table, std::size_t sample_size,
                              std::uint64_t seed) {
  if (sample_size == 0) throw PreviewError("sample size must be positive");
  const SchemaVertex& key = scored.schema().vertex(table.key);
  const auto members = graph.members(key.origin);
  if (members.empty()) throw PreviewError("entity type '" + key.id + "' has no entities");

  // Partial Fisher-Yates: the first `take` slots end up a uniform sample.
  std::vector<EntityId> pool(members.begin(), members.end());
  const std::size_t take = std::min(sample_size, pool.size());
  Rng rng(seed);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + uniform_below(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(take);
  std::sort(pool.begin(), pool.end());

  MaterializedTable out;
  out.key_label = key.label;
  for (const auto& column : table.nonkeys) {
    out.column_labels.push_back(column_label(scored, column.candidate));
  }
  for (EntityId entity : pool) {
    MaterializedRow row;
    row.key = graph.entity(entity).name;
    for (const auto& column : table.nonkeys) {
      const SchemaEdge& edge = candidate_edge(scored, column.candidate);
      std::vector<std::string> cell;
      for (EntityId v : graph.neighbors(entity, edge.origin, column.candidate.direction)) {
        cell.push_back(graph.entity(v).name);
      }
      std::sort(cell.begin(), cell.end());
      row.cells.push_back(std::move(cell));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<MaterializedTable> materialize_preview(const EntityGraph& graph,
                                                   const ScoredSchema& scored,
                                                   const Preview& preview,
                                                   std::size_t sample_size, std::uint64_t seed) {
  std::vector<MaterializedTable> out;
  for (std::size_t i = 0; i < preview.tables.size(); ++i) {
    out.push_back(
        materialize(graph, scored, preview.tables[i], sample_size, splitmix64(seed + i)));
  }
  return out;
}

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::kJson ? "json" : "markdown";
}

std::optional<OutputFormat> parse_output_format(std::string_view text) {
  if (text == "json") return OutputFormat::kJson;
  if (text == "markdown" || text == "md") return OutputFormat::kMarkdown;
  return std::nullopt;
}

double round_score(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return std::strtod(buffer, nullptr);
}

namespace {

void check_tables(const Preview& preview, std::span<const MaterializedTable> tables) {
  if (tables.size() != preview.tables.size()) {
    throw PreviewError("materialized tables do not match the preview");
  }
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (tables[i].column_labels.size() != preview.tables[i].nonkeys.size()) {
      throw PreviewError("materialized table " + std::to_string(i) +
                         " has the wrong number of columns");
    }
  }
}

std::string format_score(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6g", value);
  return buffer;
}

// Keeps user-supplied names from breaking the pipe table.
std::string markdown_escape(std::string_view text) {
  std::string out;
  for (char ch : text) {
    if (ch == '|' || ch == '\\' || ch == '*' || ch == '_') out += '\\';
    out += ch;
  }
  return out;
}

std::string markdown_cell(const std::vector<std::string>& values) {
  if (values.empty()) return "-";
  if (values.size() == 1) return markdown_escape(values.front());
  std::string out = "{";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ", ";
    out += markdown_escape(values[i]);
  }
  return out + "}";
}

}  // namespace

std::string render_json(const ScoredSchema& scored, const Preview& preview,
                        std::span<const MaterializedTable> tables, const RenderContext& context) {
  check_tables(preview, tables);
  Json doc;
  Json constraints;
  constraints["k"] = context.constraints.k;
  constraints["n"] = context.constraints.n;
  if (context.constraints.d) constraints["d"] = *context.constraints.d;
  constraints["mode"] = to_string(context.constraints.mode);
  doc["constraints"] = std::move(constraints);
  doc["measures"] = Json{{"key", to_string(context.key_measure)},
                         {"nonkey", to_string(context.nonkey_measure)}};
  doc["total_score"] = round_score(preview.total_score);

  Json out_tables = Json::array();
  for (std::size_t i = 0; i < preview.tables.size(); ++i) {
    const PreviewTable& table = preview.tables[i];
    const SchemaVertex& key = scored.schema().vertex(table.key);
    Json t;
    t["key_type"] = key.id;
    t["key_label"] = key.label;
    t["score"] = round_score(table.score);
    Json columns = Json::array();
    for (const auto& column : table.nonkeys) {
      const SchemaEdge& edge = candidate_edge(scored, column.candidate);
      columns.push_back(Json{{"edge_type", edge.id},
                             {"label", edge.label},
                             {"direction", to_string(column.candidate.direction)},
                             {"score", round_score(column.score)}});
    }
    t["columns"] = std::move(columns);
    Json rows = Json::array();
    for (const auto& row : tables[i].rows) {
      rows.push_back(Json{{"key", row.key}, {"cells", row.cells}});
    }
    t["rows"] = std::move(rows);
    out_tables.push_back(std::move(t));
  }
  doc["tables"] = std::move(out_tables);
  return doc.dump() + "\n";
}

std::string render_markdown(const ScoredSchema& scored, const Preview& preview,
                            std::span<const MaterializedTable> tables,
                            const RenderContext& context) {
  check_tables(preview, tables);
  std::ostringstream out;
  out << "Preview score " << format_score(preview.total_score) << " ("
      << to_string(context.constraints.mode) << ", k=" << context.constraints.k
      << ", n=" << context.constraints.n;
  if (context.constraints.d) out << ", d=" << *context.constraints.d;
  out << "; key " << to_string(context.key_measure) << ", non-key "
      << to_string(context.nonkey_measure) << ")\n";

  std::size_t tuple = 0;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const MaterializedTable& table = tables[i];
    out << "\nTable " << i + 1 << ": " << markdown_escape(table.key_label) << " (score "
        << format_score(preview.tables[i].score) << ", key "
        << scored.schema().vertex(preview.tables[i].key).id << ")\n\n";
    out << "|   | __" << markdown_escape(table.key_label) << "__ |";
    for (const auto& label : table.column_labels) out << ' ' << markdown_escape(label) << " |";
    out << "\n|---|---|";
    for (std::size_t c = 0; c < table.column_labels.size(); ++c) out << "---|";
    out << '\n';
    for (const auto& row : table.rows) {
      out << "| t" << ++tuple << " | " << markdown_escape(row.key) << " |";
      for (const auto& cell : row.cells) out << ' ' << markdown_cell(cell) << " |";
      out << '\n';
    }
  }
  return out.str();
}

std::string render(const ScoredSchema& scored, const Preview& preview,
                   std::span<const MaterializedTable> tables, const RenderContext& context,
                   OutputFormat format) {
  return format == OutputFormat::kJson ? render_json(scored, preview, tables, context)
                                       : render_markdown(scored, preview, tables, context);
}

}  // namespace egpreview
