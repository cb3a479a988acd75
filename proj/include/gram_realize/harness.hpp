// Copyright 2026 The gram-realize Authors
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


#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gram_realize/controller.hpp"
#include "gram_realize/scenarios.hpp"

namespace gram_realize {

enum class OutputFormat { kCsv, kJson };

OutputFormat parse_format(std::string_view name);

// Outcome of one generate-then-realize run.
struct RunRecord {
  ScenarioKind scenario = ScenarioKind::kPure;
  LayoutSpec layout;
  std::uint64_t seed = 0;
  long subroutine_calls = 0;
  double final_error = 0.0;
  double final_max_entry_error = 0.0;
  bool success = false;
  double wall_time = 0.0;
  std::vector<ModeSegment> mode_segments;
  // Set when generation or solving threw; the run then counts as a failure.
  std::string failure_reason;
  // Present when ExperimentConfig::keep_models is set.
  std::optional<ModelMatrix> model;
  std::optional<GramMatrix> gram;
};

struct ExperimentEntry {
  ScenarioConfig scenario;
  // 0 uses ExperimentConfig::runs_per_scenario.
  int runs = 0;
  // Overrides SolveConfig::time_limit_s for this entry when positive.
  double time_limit_s = 0.0;
};

struct ExperimentConfig {
  std::vector<ExperimentEntry> scenarios;
  int runs_per_scenario = 1;
  SolveConfig solve;
  std::string output_path;
  OutputFormat output_format = OutputFormat::kCsv;
  int workers = 1;
  int bucket_width = 50;
  bool keep_models = false;

  void validate() const;
};

// Seed of run `index` of a scenario with base seed `base`.
std::uint64_t run_seed(std::uint64_t base, int index);
// Solver stream seed derived from a run seed, distinct from the generator's.
std::uint64_t solver_seed(std::uint64_t run_seed, std::uint64_t solve_seed);

// Runs every scenario entry; records come back sorted by entry, then run index,
// whatever order the workers finish in.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

// Executes a single run (used by run_experiment).
RunRecord execute_run(const ScenarioConfig& scenario, const SolveConfig& solve, bool keep_model);

struct SummaryRow {
  ScenarioKind scenario = ScenarioKind::kPure;
  LayoutSpec layout;
  int successes = 0;
  int failures = 0;
  long min_calls = 0;
  double median_calls = 0.0;
  long max_calls = 0;
};

// One row per (scenario, d, W, V, K), sorted by that key.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);

struct HistogramRow {
  ScenarioKind scenario = ScenarioKind::kPure;
  LayoutSpec layout;
  long bucket_start = 0;
  int count = 0;
};

// Non-empty buckets [start, start + width) of subroutine_calls per
// (scenario, layout), sorted.
std::vector<HistogramRow> emit_histogram_data(const std::vector<RunRecord>& records,
                                              int bucket_width);

bool all_succeeded(const std::vector<RunRecord>& records);

}  // namespace gram_realize
