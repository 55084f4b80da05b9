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

#include "egpreview/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "egpreview/graph.hpp"
#include "egpreview/schema.hpp"
#include "json.hpp"

namespace egpreview {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kCacheVersion = 1;

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kAuto:
      return "auto";
    case Algorithm::kBruteForce:
      return "brute";
    case Algorithm::kDynamicProgram:
      return "dp";
    case Algorithm::kApriori:
      return "apriori";
  }
  return "auto";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  if (text == "auto") return Algorithm::kAuto;
  if (text == "brute") return Algorithm::kBruteForce;
  if (text == "dp") return Algorithm::kDynamicProgram;
  if (text == "apriori") return Algorithm::kApriori;
  return std::nullopt;
}

void CliConfig::validate() const {
  if (input.empty()) throw UsageError("--input is required");
  try {
    constraints().validate();
  } catch (const DiscoveryError& e) {
    throw UsageError(e.what());
  }
  if (algorithm == Algorithm::kDynamicProgram) {
    if (mode != PreviewMode::kConcise) {
      throw UsageError("--algorithm dp handles concise previews only");
    }
    if (gain == GainOrder::kRawScore) {
      throw UsageError("--algorithm dp requires --gain weighted");
    }
  }
  if (algorithm == Algorithm::kApriori && mode == PreviewMode::kConcise) {
    throw UsageError("--algorithm apriori requires --mode tight or diverse");
  }
  if (tuples == 0) throw UsageError("--tuples must be positive");
  if (!(random_walk.teleport > 0.0) || !std::isfinite(random_walk.teleport)) {
    throw UsageError("--teleport must be positive");
  }
  if (!(random_walk.tolerance > 0.0) || !std::isfinite(random_walk.tolerance)) {
    throw UsageError("--tolerance must be positive");
  }
  if (random_walk.max_iterations == 0) throw UsageError("--max-iterations must be positive");
}

Algorithm CliConfig::resolved_algorithm() const {
  if (algorithm != Algorithm::kAuto) return algorithm;
  if (mode != PreviewMode::kConcise) return Algorithm::kApriori;
  return gain == GainOrder::kKeyWeighted ? Algorithm::kDynamicProgram : Algorithm::kBruteForce;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

namespace {

class Diagnostics {
 public:
  Diagnostics(bool enabled, std::ostream& err) : enabled_(enabled), err_(err) {}

  template <typename... Parts>
  void log(const Parts&... parts) {
    if (!enabled_) return;
    err_ << "egpreview: ";
    (err_ << ... << parts);
    err_ << '\n';
  }

  // Logs the milliseconds since the previous phase ended.
  void phase(std::string_view name) {
    const auto now = std::chrono::steady_clock::now();
    if (enabled_) {
      char ms[32];
      std::snprintf(ms, sizeof ms, "%.3f",
                    std::chrono::duration<double, std::milli>(now - last_).count());
      log("time ", name, ": ", ms, " ms");
    }
    last_ = now;
  }

 private:
  bool enabled_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

bool logging_requested(const CliConfig& config) {
  if (config.timings) return true;
  const char* env = std::getenv("EGPREVIEW_LOG");
  return env != nullptr && *env != '\0' && std::string_view(env) != "0";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read '" + path + "'");
  return bytes;
}

std::string exact(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

// Everything the cached scores depend on besides the schema itself.
std::string cache_key(const CliConfig& config, const std::string& input_bytes) {
  std::string key = input_bytes;
  key += '\0';
  key += to_string(config.key_measure);
  key += '\0';
  key += to_string(config.nonkey_measure);
  if (config.key_measure == KeyMeasure::kRandomWalk) {
    key += '\0' + exact(config.random_walk.teleport) + '\0' +
           exact(config.random_walk.tolerance) + '\0' +
           std::to_string(config.random_walk.max_iterations);
  }
  return key;
}

std::optional<ScoredSchema> load_cached(const fs::path& file, std::uint64_t hash,
                                        const SchemaGraph& schema, Diagnostics& diag) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  try {
    const Json doc = Json::parse(in);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
    if (doc.at("version").get<int>() != kCacheVersion || doc.at("key").get<std::string>() != hex) {
      return std::nullopt;
    }
    auto keys = doc.at("key_scores").get<std::vector<double>>();
    auto nonkeys = doc.at("nonkey_scores").get<std::vector<std::vector<double>>>();
    return ScoredSchema(schema, std::move(keys), std::move(nonkeys));
  } catch (const std::exception& e) {
    diag.log("ignoring unusable cache file ", file.string(), " (", e.what(), ")");
    return std::nullopt;
  }
}

void store_cached(const fs::path& file, std::uint64_t hash, const ScoredSchema& scored,
                  Diagnostics& diag) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
  Json doc;
  doc["version"] = kCacheVersion;
  doc["key"] = hex;
  doc["key_scores"] = std::vector<double>(scored.key_scores().begin(), scored.key_scores().end());
  Json nonkeys = Json::array();
  for (std::size_t t = 0; t < scored.type_count(); ++t) {
    // Aligned with incident_candidates(), not with the ranked order.
    Json row = Json::array();
    for (const auto& c : incident_candidates(scored.schema(), t)) {
      row.push_back(scored.nonkey_score(c));
    }
    nonkeys.push_back(std::move(row));
  }
  doc["nonkey_scores"] = std::move(nonkeys);

  std::error_code ec;
  fs::create_directories(file.parent_path(), ec);
  const fs::path temp = file.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::trunc);
    out << doc.dump() << '\n';
    if (!out) {
      diag.log("could not write cache file ", temp.string());
      fs::remove(temp, ec);
      return;
    }
  }
  fs::rename(temp, file, ec);
  if (ec) {
    diag.log("could not install cache file ", file.string(), " (", ec.message(), ")");
    fs::remove(temp, ec);
  }
}

ScoredSchema score(const CliConfig& config, const EntityGraph& graph, const SchemaGraph& schema,
                   const std::string& input_bytes, Diagnostics& diag) {
  if (config.cache_dir.empty()) {
    return build_scored_schema(graph, schema, config.key_measure, config.nonkey_measure,
                               config.random_walk);
  }
  const std::uint64_t hash = fnv1a64(cache_key(config, input_bytes));
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json", static_cast<unsigned long long>(hash));
  const fs::path file = fs::path(config.cache_dir) / name;
  if (auto cached = load_cached(file, hash, schema, diag)) {
    diag.log("scores loaded from ", file.string());
    return std::move(*cached);
  }
  ScoredSchema scored = build_scored_schema(graph, schema, config.key_measure,
                                            config.nonkey_measure, config.random_walk);
  store_cached(file, hash, scored, diag);
  return scored;
}

std::vector<Preview> discover(const CliConfig& config, const ScoredSchema& scored) {
  const Constraints c = config.constraints();
  if (config.all_optima) return all_optimal_previews(scored, c, config.gain);
  switch (config.resolved_algorithm()) {
    case Algorithm::kDynamicProgram:
      return {dp_concise(scored, c.k, c.n)};
    case Algorithm::kApriori:
      return {apriori_discover(scored, c, config.gain)};
    case Algorithm::kBruteForce:
    case Algorithm::kAuto:
      break;
  }
  return {brute_force(scored, c, config.gain)};
}

int fail(std::ostream& err, std::string_view kind, std::string_view message, int code) {
  Json doc;
  doc["error"] = kind;
  doc["message"] = message;
  doc["exit_code"] = code;
  err << doc.dump() << '\n';
  return code;
}

}  // namespace

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    Diagnostics diag(logging_requested(config), err);

    const std::string bytes = read_file(config.input);
    diag.phase("read input");
    const EntityGraph graph = parse_entity_graph(std::string_view(bytes));
    diag.log("graph: ", graph.types().size(), " entity types, ", graph.relations().size(),
             " relationship types, ", graph.entities().size(), " entities, ",
             graph.edges().size(), " edges");
    diag.phase("parse");
    const SchemaGraph schema = derive_schema_graph(graph);
    diag.log("schema: ", schema.vertex_count(), " types, ", schema.edge_count(),
             " relationship types");
    diag.phase("schema");
    const ScoredSchema scored = score(config, graph, schema, bytes, diag);
    diag.phase("scoring");
    const std::vector<Preview> previews = discover(config, scored);
    diag.log("algorithm: ",
             config.all_optima ? std::string_view("brute") : to_string(config.resolved_algorithm()),
             ", optimal previews: ", previews.size());
    diag.phase("discovery");

    const RenderContext context{config.constraints(), config.key_measure, config.nonkey_measure};
    std::string rendered;
    for (std::size_t i = 0; i < previews.size(); ++i) {
      const auto tables =
          materialize_preview(graph, scored, previews[i], config.tuples, config.seed);
      if (i > 0 && config.format == OutputFormat::kMarkdown) rendered += "\n---\n\n";
      rendered += render(scored, previews[i], tables, context, config.format);
    }
    diag.phase("render");
    out << rendered;
    out.flush();
    return kExitOk;
  } catch (const UsageError& e) {
    return fail(err, "usage", e.what(), kExitUsage);
  } catch (const IoError& e) {
    return fail(err, "file", e.what(), kExitFile);
  } catch (const ParseError& e) {
    return fail(err, "parse", e.what(), kExitParse);
  } catch (const ConvergenceError& e) {
    return fail(err, "convergence", e.what(), kExitConvergence);
  } catch (const ScoringError& e) {
    return fail(err, "usage", e.what(), kExitUsage);
  } catch (const DiscoveryError& e) {
    if (e.kind() == DiscoveryError::Kind::kInfeasible) {
      return fail(err, "infeasible", e.what(), kExitInfeasible);
    }
    return fail(err, "usage", e.what(), kExitUsage);
  } catch (const PreviewError& e) {
    return fail(err, "usage", e.what(), kExitUsage);
  } catch (const std::exception& e) {
    return fail(err, "internal", e.what(), kExitInternal);
  }
}

int run_command_line(const std::vector<std::string>& args, std::ostream& out,
                     std::ostream& err) {
  CliConfig config;
  CLI::App app{"Discover and print an optimal preview of an entity graph."};
  app.name("egpreview");

  std::string mode = "concise", key = "coverage", nonkey = "coverage", algorithm = "auto",
              format = "json", gain = "weighted";
  std::uint32_t d = 0;
  app.add_option("-i,--input", config.input, "Entity graph file")->required();
  app.add_option("-m,--mode", mode, "Preview kind")
      ->check(CLI::IsMember({"concise", "tight", "diverse"}));
  app.add_option("-k,--tables", config.k, "Number of preview tables")->required();
  app.add_option("-n,--columns", config.n, "Total number of non-key columns")->required();
  CLI::Option* d_option =
      app.add_option("-d,--distance", d, "Distance bound for tight/diverse previews");
  app.add_option("--key", key, "Key attribute measure")
      ->check(CLI::IsMember({"coverage", "randomwalk", "random-walk"}));
  app.add_option("--nonkey", nonkey, "Non-key attribute measure")
      ->check(CLI::IsMember({"coverage", "entropy"}));
  app.add_option("-a,--algorithm", algorithm, "Discovery algorithm")
      ->check(CLI::IsMember({"auto", "brute", "dp", "apriori"}));
  app.add_option("--gain", gain, "Ranking of leftover columns across tables")
      ->check(CLI::IsMember({"weighted", "raw"}));
  app.add_option("-t,--tuples", config.tuples, "Sample tuples per table")
      ->capture_default_str();
  app.add_option("-s,--seed", config.seed, "Sampling seed")->capture_default_str();
  app.add_option("-f,--format", format, "Output format")
      ->check(CLI::IsMember({"json", "markdown", "md"}));
  app.add_option("--teleport", config.random_walk.teleport, "Random-walk teleport weight")
      ->capture_default_str();
  app.add_option("--tolerance", config.random_walk.tolerance, "Random-walk L1 tolerance")
      ->capture_default_str();
  app.add_option("--max-iterations", config.random_walk.max_iterations,
                 "Random-walk iteration cap")
      ->capture_default_str();
  app.add_flag("--timings", config.timings, "Print phase timings to stderr");
  app.add_flag("--all-optima", config.all_optima, "Print every optimal preview");
  app.add_option("--cache-dir", config.cache_dir, "Directory for cached attribute scores");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(err, "usage", e.what(), kExitUsage);
  }

  config.mode = *parse_preview_mode(mode);
  if (d_option->count() > 0) config.d = d;
  config.key_measure = *parse_key_measure(key);
  config.nonkey_measure = *parse_nonkey_measure(nonkey);
  config.algorithm = *parse_algorithm(algorithm);
  config.gain = gain == "raw" ? GainOrder::kRawScore : GainOrder::kKeyWeighted;
  config.format = *parse_output_format(format);
  return run(config, out, err);
}

}  // namespace egpreview
