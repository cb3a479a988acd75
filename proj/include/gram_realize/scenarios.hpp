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
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gram_realize/gram.hpp"
#include "gram_realize/hermitian.hpp"

namespace gram_realize {

using Rng = std::mt19937_64;

enum class ScenarioKind { kPure, kPartlyMixed, kPurified };

std::string_view scenario_name(ScenarioKind kind);
// Accepts "pure", "partly_mixed" (also "partly-mixed", "partly mixed") and "purified".
ScenarioKind parse_scenario(std::string_view name);

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::kPure;
  LayoutSpec layout;
  // Only used by partly_mixed.
  std::pair<double, double> eta_bounds{0.6, 0.8};
  std::pair<double, double> mu_bounds{0.6, 0.8};
  std::uint64_t seed = 0;

  void validate() const;
};

struct GroundTruthModel {
  LayoutSpec layout;
  std::vector<HermitianMatrix> states;
  // effects[v][k]
  std::vector<std::vector<HermitianMatrix>> effects;
};

// Worst-case violations of the state and POVM constraints.
struct ModelDefects {
  double max_trace_error = 0.0;        // max_w |tr(rho_w) - 1|
  double min_state_eigenvalue = 0.0;   // min_w lambda_min(rho_w)
  double min_effect_eigenvalue = 0.0;  // min_vk lambda_min(E_vk)
  double max_completeness_error = 0.0; // max_v max_ij |(sum_k E_vk - I)_ij|
};

ModelDefects model_defects(const GroundTruthModel& model);

// Haar-distributed n x n unitary: QR of a complex Ginibre matrix with the
// phases of diag(R) moved into Q.
CMatrix haar_unitary(int n, Rng& rng);

constexpr int kPartlyMixedMaxAttempts = 1000;

GroundTruthModel gen_pure(const ScenarioConfig& cfg);
GroundTruthModel gen_partly_mixed(const ScenarioConfig& cfg);
GroundTruthModel gen_purified(const ScenarioConfig& cfg);
// Dispatch on cfg.kind.
GroundTruthModel generate(const ScenarioConfig& cfg);

// Variants drawing from a caller-owned stream; cfg.seed is ignored.
GroundTruthModel gen_pure(const ScenarioConfig& cfg, Rng& rng);
GroundTruthModel gen_partly_mixed(const ScenarioConfig& cfg, Rng& rng);
GroundTruthModel gen_purified(const ScenarioConfig& cfg, Rng& rng);

ModelMatrix model_to_matrix(const GroundTruthModel& model);

}  // namespace gram_realize
