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
#include <string_view>
#include <vector>

#include "gram_realize/gram.hpp"
#include "gram_realize/scenarios.hpp"
#include "gram_realize/subsolver.hpp"

namespace gram_realize {

enum class Mode { kRegular, kPartial, kSelectionOfFastest };

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view name);

// Bookkeeping that drives the phase switches. One entry is appended to
// `shifts`, `shift_columns` and `error_history` per column update.
struct MonitorState {
  std::vector<double> shifts;
  std::vector<int> shift_columns;
  std::vector<double> error_history;
  double trend = 0.0;
  double zenith = -1.0;
  long counter_no_zenith = 0;
};

struct SwitchParams {
  double switch_fast_to_reg = -0.08;
  double switch_reg_to_partial = -0.01;
  long no_zenith_threshold = 0;
};

// Values of the biased coins behind init_switch_params. Heads selects the
// first member of each pair.
struct SwitchingConstants {
  double heads_probability = 0.7;
  double fast_to_reg_heads = -0.08;
  double fast_to_reg_tails = -0.05;
  double reg_to_partial_heads = -0.01;
  double reg_to_partial_tails = -0.02;
  int no_zenith_sweeps_heads = 3;
  int no_zenith_sweeps_tails = 7;
};

struct SolveConfig {
  // Stop once ||P^T P - G||_F / ||G||_F drops below this...
  double error_threshold = 1e-6;
  // ...or once every entry of P^T P is within this of G. Also decides
  // SolveReport::converged.
  double entry_threshold = 1e-2;
  double shift_stuck_tolerance = 0.002;
  // 0 selects min(d^2, M - 1).
  int neighborhood_size = 0;
  // 0 selects 500 * M.
  long max_subroutine_calls = 0;
  // Wall-clock limit in seconds; 0 disables it.
  double time_limit_s = 0.0;
  std::uint64_t rng_seed = 0;
  SubsolverOptions subsolver;
  SwitchingConstants switching;

  void validate(const LayoutSpec& layout) const;
  int resolved_neighborhood(const LayoutSpec& layout) const;
  long resolved_budget(const LayoutSpec& layout) const;
};

struct ModeSegment {
  Mode mode = Mode::kPartial;
  long calls = 0;
  bool operator==(const ModeSegment&) const = default;
};

struct SolveReport {
  double final_error = 0.0;
  double final_max_entry_error = 0.0;
  long subroutine_calls = 0;
  std::vector<ModeSegment> mode_history;
  bool converged = false;
  double wall_time = 0.0;
  // Constraints the column updates do not enforce, measured on the result.
  double max_trace_error = 0.0;
  double max_completeness_error = 0.0;
  double min_eigenvalue = 0.0;
  bool budget_exhausted = false;
};

struct Realization {
  ModelMatrix model;
  SolveReport report;
};

// Random density matrices and POVMs from the purified sampler.
ModelMatrix init_model(const LayoutSpec& layout, Rng& rng);

// Column updates. Each returns the new coordinates for column `ind`; the
// caller writes them into P.
HermVec regular_update(const ModelMatrix& p, int ind, const GramMatrix& g,
                       const SubsolverOptions& opts = {});
HermVec partial_update(const ModelMatrix& p, int ind, const GramMatrix& g,
                       const RMatrix& distances, int neighborhood,
                       const SubsolverOptions& opts = {});
HermVec fastest_update(const ModelMatrix& p, int ind, const GramMatrix& g,
                       const MonitorState& monitor, int count,
                       const SubsolverOptions& opts = {});

// The `count` columns with the largest shifts among the last M recorded
// updates; ties go to the smaller index. Throws StateError with fewer than M
// recorded shifts.
std::vector<int> fastest_columns(const MonitorState& monitor, int columns, int count);

// Appends one update's shift and error and refreshes trend and zenith.
void monitor_record(MonitorState& monitor, int column, double shift, double error, int columns);
void monitor_step(MonitorState& monitor, int column, const HermVec& old_column,
                  const HermVec& new_column, const ModelMatrix& p, const GramMatrix& g);

SwitchParams init_switch_params(int columns, Rng& rng, const SwitchingConstants& constants = {});

// Applies one transition rule of the cycle PARTIAL -> SELECTION_OF_FASTEST ->
// REGULAR -> PARTIAL. On a switch, zenith is reset to -1 and the counter to 0.
Mode switching_decision(MonitorState& monitor, const SwitchParams& params, Mode mode,
                        int columns, double stuck_tolerance = 0.002);

// Searches PSD columns with P^T P ~= G.
Realization realize(const GramMatrix& g, const LayoutSpec& layout, const SolveConfig& config);

}  // namespace gram_realize
