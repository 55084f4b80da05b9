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

// The egpreview command: load an entity graph, score it, discover an
// optimal preview and print it.

#ifndef EGPREVIEW_CLI_HPP_
#define EGPREVIEW_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "egpreview/discovery.hpp"
#include "egpreview/preview.hpp"
#include "egpreview/scoring.hpp"

namespace egpreview {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitFile = 3,
  kExitParse = 4,
  kExitInfeasible = 5,
  kExitConvergence = 6,
};

enum class Algorithm { kAuto, kBruteForce, kDynamicProgram, kApriori };

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view text);

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CliConfig {
  std::string input;
  PreviewMode mode = PreviewMode::kConcise;
  std::size_t k = 1;
  std::size_t n = 1;
  std::optional<std::uint32_t> d;
  KeyMeasure key_measure = KeyMeasure::kCoverage;
  NonKeyMeasure nonkey_measure = NonKeyMeasure::kCoverage;
  Algorithm algorithm = Algorithm::kAuto;
  GainOrder gain = GainOrder::kKeyWeighted;
  std::size_t tuples = 3;
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::kJson;
  RandomWalkConfig random_walk;
  bool timings = false;
  bool all_optima = false;
  std::string cache_dir;  // empty: no cache

  Constraints constraints() const { return {k, n, mode, d}; }

  // Throws UsageError for inconsistent settings: d present iff the mode is
  // tight or diverse, dp only for concise previews with key-weighted gains,
  // apriori only for tight or diverse previews, positive sample size, and
  // sane random-walk parameters.
  void validate() const;

  // The solver `run` uses: auto picks dp for concise previews (brute force
  // under raw-score gains, which dp does not model) and apriori otherwise.
  Algorithm resolved_algorithm() const;
};

// Runs the pipeline and writes the rendered preview to `out`. Diagnostics
// go to `err` when config.timings is set or EGPREVIEW_LOG is non-empty and
// not "0". Failures print one JSON object on a single line to `err`:
//   {"error":"<kind>","message":"<text>","exit_code":<code>}
// and return the matching ExitCode.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

// Parses argv-style arguments (without the program name) into a config and
// runs it. --help prints usage to `out` and returns 0.
int run_command_line(const std::vector<std::string>& args, std::ostream& out,
                     std::ostream& err);

// Stable 64-bit FNV-1a, used to key the score cache.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace egpreview

#endif  // EGPREVIEW_CLI_HPP_
