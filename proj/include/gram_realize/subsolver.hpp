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

#include <span>
#include <vector>

#include "gram_realize/gram.hpp"
#include "gram_realize/hermitian.hpp"

namespace gram_realize {

struct SubsolverOptions {
  int max_iterations = 2000;
  // Stagnation guard: iteration halts once the best objective has improved by
  // less than this relative amount over kStagnationWindow iterations and the
  // fixed-point residual is below kCertificateTolerance * (1 + ||x||).
  double objective_tolerance = 1e-9;
  double psd_eigen_tolerance = 1e-10;
  // Halt when ||x - Proj(x - grad f(x) / L)|| <= fixed_point_tolerance * (1 + ||x||).
  double fixed_point_tolerance = 1e-10;

  static constexpr int kStagnationWindow = 50;
  static constexpr double kCertificateTolerance = 1e-8;

  void validate() const;
};

// min_v || (P^T v)_S - b ||_2 subject to from_coords(v) >= 0.
class SubproblemSpec {
 public:
  SubproblemSpec(const ModelMatrix& p, std::span<const int> rows, RVector target);

  int dim() const { return dim_; }
  const std::vector<int>& rows() const { return rows_; }
  const RVector& target() const { return b_; }
  // d^2 x |S| matrix whose columns are P(:, s) for s in S.
  const RMatrix& active_columns() const { return a_; }

  // ||A^T v - b||_2.
  double objective(const Eigen::Ref<const RVector>& v) const;
  // Largest eigenvalue of A A^T by power iteration.
  double lipschitz() const;

 private:
  int dim_;
  std::vector<int> rows_;
  RMatrix a_;
  RVector b_;
};

struct SubsolveResult {
  HermVec v;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Accelerated projected gradient with monotone restarts. Never throws on
// non-convergence; the result carries converged = false instead.
SubsolveResult solve_psd_lsq(const SubproblemSpec& spec, const HermVec& v0,
                             const SubsolverOptions& opts = {});

// ||v - Proj_PSD(v - grad f(v) / L)|| with f = 0.5 ||A^T v - b||^2.
double fixed_point_residual(const SubproblemSpec& spec, const Eigen::Ref<const RVector>& v);

// Power iteration for the top eigenvalue of a symmetric PSD matrix.
double power_iteration(const RMatrix& q, int max_steps = 100, double rel_tol = 1e-10);

}  // namespace gram_realize
