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


#include "gram_realize/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gram_realize/errors.hpp"

namespace gram_realize {

std::string_view scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kPure:
      return "pure";
    case ScenarioKind::kPartlyMixed:
      return "partly_mixed";
    case ScenarioKind::kPurified:
      return "purified";
  }
  return "unknown";
}

ScenarioKind parse_scenario(std::string_view name) {
  if (name == "pure") return ScenarioKind::kPure;
  if (name == "partly_mixed" || name == "partly-mixed" || name == "partly mixed")
    return ScenarioKind::kPartlyMixed;
  if (name == "purified") return ScenarioKind::kPurified;
  throw InputError("unknown scenario '" + std::string(name) + "'");
}

void ScenarioConfig::validate() const {
  layout.validate();
  auto check = [](const std::pair<double, double>& b, const char* what) {
    if (!(0.0 <= b.first && b.first <= b.second && b.second <= 1.0))
      throw InputError(std::string(what) + " bounds must satisfy 0 <= lb <= ub <= 1");
  };
  check(eta_bounds, "eta");
  check(mu_bounds, "mu");
  if (kind != ScenarioKind::kPurified && layout.K > layout.d)
    throw InputError(std::string(scenario_name(kind)) + " scenario needs K <= d (K=" +
                     std::to_string(layout.K) + ", d=" + std::to_string(layout.d) + ")");
  if (kind == ScenarioKind::kPartlyMixed && layout.d < 2)
    throw InputError("partly_mixed scenario needs d >= 2");
}

ModelDefects model_defects(const GroundTruthModel& model) {
  ModelDefects out;
  out.min_state_eigenvalue = std::numeric_limits<double>::infinity();
  out.min_effect_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& rho : model.states) {
    out.max_trace_error = std::max(out.max_trace_error, std::abs(rho.trace() - 1.0));
    out.min_state_eigenvalue = std::min(out.min_state_eigenvalue, min_eigenvalue(rho));
  }
  const int d = model.layout.d;
  for (const auto& group : model.effects) {
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& e : group) {
      sum += e.entries();
      out.min_effect_eigenvalue = std::min(out.min_effect_eigenvalue, min_eigenvalue(e));
    }
    out.max_completeness_error = std::max(
        out.max_completeness_error, (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff());
  }
  return out;
}

CMatrix haar_unitary(int n, Rng& rng) {
  if (n < 1) throw InputError("haar_unitary: n must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = Complex(normal(rng), normal(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    const Complex phase = mag > 0.0 ? r(j, j) / mag : Complex(1.0);
    q.col(j) *= phase;
  }
  return q;
}

namespace {

HermitianMatrix hermitian(const CMatrix& m) { return HermitianMatrix(0.5 * (m + m.adjoint())); }

HermitianMatrix conjugate(const CMatrix& u, const RVector& diag) {
  return hermitian(u * diag.cast<Complex>().asDiagonal() * u.adjoint());
}

GroundTruthModel empty_model(const ScenarioConfig& cfg) {
  GroundTruthModel m;
  m.layout = cfg.layout;
  m.states.reserve(cfg.layout.W);
  m.effects.resize(cfg.layout.V);
  return m;
}

}  // namespace

GroundTruthModel gen_pure(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto& l = cfg.layout;
  GroundTruthModel m = empty_model(cfg);
  RVector first = RVector::Zero(l.d);
  first(0) = 1.0;
  for (int w = 0; w < l.W; ++w) m.states.push_back(conjugate(haar_unitary(l.d, rng), first));

  // Split the d basis vectors into K consecutive groups of near-equal size.
  const int base = l.d / l.K, extra = l.d % l.K;
  for (int v = 0; v < l.V; ++v) {
    const CMatrix u = haar_unitary(l.d, rng);
    int col = 0;
    for (int k = 0; k < l.K; ++k) {
      const int size = base + (k < extra ? 1 : 0);
      const auto block = u.middleCols(col, size);
      m.effects[v].push_back(hermitian(block * block.adjoint()));
      col += size;
    }
  }
  return m;
}

GroundTruthModel gen_partly_mixed(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto& l = cfg.layout;
  GroundTruthModel m = empty_model(cfg);
  std::uniform_real_distribution<double> eta(cfg.eta_bounds.first, cfg.eta_bounds.second);
  std::uniform_real_distribution<double> mu(cfg.mu_bounds.first, cfg.mu_bounds.second);

  for (int w = 0; w < l.W; ++w) {
    const double e = eta(rng);
    RVector diag = RVector::Zero(l.d);
    diag(0) = e;
    diag(1) = 1.0 - e;
    m.states.push_back(conjugate(haar_unitary(l.d, rng), diag));
  }

  for (int v = 0; v < l.V; ++v) {
    std::vector<double> weights(l.K - 1);
    bool accepted = false;
    for (int attempt = 0; attempt < kPartlyMixedMaxAttempts && !accepted; ++attempt) {
      for (auto& x : weights) x = mu(rng);
      std::vector<HermitianMatrix> group;
      CMatrix rest = CMatrix::Identity(l.d, l.d);
      for (int k = 0; k + 1 < l.K; ++k) {
        RVector diag = RVector::Zero(l.d);
        diag(k) = weights[k];
        group.push_back(conjugate(haar_unitary(l.d, rng), diag));
        rest -= group.back().entries();
      }
      HermitianMatrix last = hermitian(rest);
      if (min_eigenvalue(last) >= 0.0) {
        group.push_back(std::move(last));
        m.effects[v] = std::move(group);
        accepted = true;
      }
    }
    if (!accepted)
      throw GenerationError("partly_mixed: no valid POVM for measurement " + std::to_string(v) +
                            " after " + std::to_string(kPartlyMixedMaxAttempts) + " attempts");
  }
  return m;
}

GroundTruthModel gen_purified(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  const auto& l = cfg.layout;
  GroundTruthModel m = empty_model(cfg);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int w = 0; w < l.W; ++w) {
    RVector p(l.d);
    do {
      for (int a = 0; a < l.d; ++a) p(a) = unit(rng);
    } while (p.sum() == 0.0);
    p /= p.sum();
    m.states.push_back(conjugate(haar_unitary(l.d, rng), p));
  }

  // Composite space ordered ancilla-major: row block k holds <k| (x) I_d, and
  // the ancilla starts in its first basis state, i.e. the first d columns.
  for (int v = 0; v < l.V; ++v) {
    const CMatrix u = haar_unitary(l.d * l.K, rng);
    for (int k = 0; k < l.K; ++k) {
      const CMatrix kraus = u.block(k * l.d, 0, l.d, l.d);
      m.effects[v].push_back(hermitian(kraus.adjoint() * kraus));
    }
  }
  return m;
}

GroundTruthModel gen_pure(const ScenarioConfig& cfg) {
  Rng rng(cfg.seed);
  return gen_pure(cfg, rng);
}

GroundTruthModel gen_partly_mixed(const ScenarioConfig& cfg) {
  Rng rng(cfg.seed);
  return gen_partly_mixed(cfg, rng);
}

GroundTruthModel gen_purified(const ScenarioConfig& cfg) {
  Rng rng(cfg.seed);
  return gen_purified(cfg, rng);
}

GroundTruthModel generate(const ScenarioConfig& cfg) {
  switch (cfg.kind) {
    case ScenarioKind::kPure:
      return gen_pure(cfg);
    case ScenarioKind::kPartlyMixed:
      return gen_partly_mixed(cfg);
    case ScenarioKind::kPurified:
      return gen_purified(cfg);
  }
  throw InputError("unknown scenario kind");
}

ModelMatrix model_to_matrix(const GroundTruthModel& model) {
  const auto& l = model.layout;
  l.validate();
  if (static_cast<int>(model.states.size()) != l.W ||
      static_cast<int>(model.effects.size()) != l.V)
    throw InputError("model does not match its layout");
  RMatrix cols(l.coord_length(), l.columns());
  for (int w = 0; w < l.W; ++w) {
    if (model.states[w].dim() != l.d) throw InputError("state dimension mismatch");
    to_coords(model.states[w].entries(), cols.col(w));
  }
  for (int v = 0; v < l.V; ++v) {
    if (static_cast<int>(model.effects[v].size()) != l.K)
      throw InputError("measurement " + std::to_string(v) + " does not have K effects");
    for (int k = 0; k < l.K; ++k) {
      if (model.effects[v][k].dim() != l.d) throw InputError("effect dimension mismatch");
      to_coords(model.effects[v][k].entries(), cols.col(l.effect_index(v, k)));
    }
  }
  return ModelMatrix(l, std::move(cols));
}

}  // namespace gram_realize
