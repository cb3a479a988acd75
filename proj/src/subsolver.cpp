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


#include "gram_realize/subsolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gram_realize/errors.hpp"

namespace gram_realize {

void SubsolverOptions::validate() const {
  if (max_iterations < 1) throw InputError("subsolver max_iterations must be >= 1");
  if (!(objective_tolerance > 0.0) || !(psd_eigen_tolerance > 0.0) ||
      !(fixed_point_tolerance > 0.0))
    throw InputError("subsolver tolerances must be > 0");
}

SubproblemSpec::SubproblemSpec(const ModelMatrix& p, std::span<const int> rows, RVector target)
    : dim_(p.layout().d), rows_(rows.begin(), rows.end()), b_(std::move(target)) {
  if (rows_.empty()) throw InputError("subproblem needs at least one active row");
  if (static_cast<Eigen::Index>(rows_.size()) != b_.size())
    throw InputError("subproblem target length " + std::to_string(b_.size()) +
                     " does not match " + std::to_string(rows_.size()) + " rows");
  std::vector<int> sorted = rows_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InputError("subproblem rows must be distinct");
  if (sorted.front() < 0 || sorted.back() >= p.size())
    throw InputError("subproblem row index out of range");
  if (!b_.allFinite()) throw NumericError("subproblem target has non-finite entries");
  a_.resize(p.layout().coord_length(), static_cast<Eigen::Index>(rows_.size()));
  for (std::size_t i = 0; i < rows_.size(); ++i) a_.col(i) = p.column(rows_[i]);
}

double SubproblemSpec::objective(const Eigen::Ref<const RVector>& v) const {
  return (a_.transpose() * v - b_).norm();
}

double SubproblemSpec::lipschitz() const {
  RMatrix q(a_.rows(), a_.rows());
  q.noalias() = a_ * a_.transpose();
  return power_iteration(q);
}

double power_iteration(const RMatrix& q, int max_steps, double rel_tol) {
  const Eigen::Index n = q.rows();
  RVector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 + 0.01 * static_cast<double>(i);
  x.normalize();
  double lambda = 0.0;
  RVector y(n);
  for (int step = 0; step < max_steps; ++step) {
    y.noalias() = q * x;
    const double next = x.dot(y);
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    x = y / norm;
    if (step > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

namespace {

double mapping_residual(const SubproblemSpec& spec, const Eigen::Ref<const RVector>& v,
                        double lip, PsdProjector& proj) {
  if (lip == 0.0) return 0.0;
  const RMatrix& a = spec.active_columns();
  RVector step = v - a * (a.transpose() * v - spec.target()) / lip;
  proj.project(step);
  return (v - step).norm();
}

}  // namespace

double fixed_point_residual(const SubproblemSpec& spec, const Eigen::Ref<const RVector>& v) {
  PsdProjector proj(spec.dim());
  return mapping_residual(spec, v, spec.lipschitz(), proj);
}

SubsolveResult solve_psd_lsq(const SubproblemSpec& spec, const HermVec& v0,
                             const SubsolverOptions& opts) {
  opts.validate();
  const int d = spec.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  if (v0.dim != d || v0.coords.size() != n)
    throw InputError("warm start has length " + std::to_string(v0.coords.size()) +
                     ", expected " + std::to_string(n));
  if (!v0.coords.allFinite()) throw NumericError("warm start has non-finite entries");

  const RMatrix& a = spec.active_columns();
  const RVector& b = spec.target();
  PsdProjector proj(d);

  RVector x = v0.coords;
  proj.project(x);
  RVector residual = a.transpose() * x - b;
  double fx = 0.5 * residual.squaredNorm();

  SubsolveResult out;
  // Margin over the power-iteration estimate, which approaches L from below.
  const double lip = 1.01 * spec.lipschitz();
  if (lip == 0.0 || fx == 0.0) {
    out.v = {d, x};
    out.objective = std::sqrt(2.0 * fx);
    out.converged = true;
    return out;
  }

  // Unconstrained minimizer nearest to x. When it is PSD it solves the
  // constrained problem as well.
  {
    const Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(a.transpose());
    RVector ls = x + cod.solve(RVector(b - a.transpose() * x));
    if (ls.allFinite() && proj.min_eigenvalue(ls) >= -opts.psd_eigen_tolerance) {
      proj.project(ls);
      const double fls = 0.5 * (a.transpose() * ls - b).squaredNorm();
      if (fls <= fx && mapping_residual(spec, ls, lip, proj) <=
                           SubsolverOptions::kCertificateTolerance * (1.0 + ls.norm())) {
        out.v = {d, std::move(ls)};
        out.objective = std::sqrt(2.0 * fls);
        out.converged = true;
        return out;
      }
    }
  }

  RVector y = x, z(n), grad(n);
  double t = 1.0;
  double window_start = fx;
  int window_count = 0;
  const double fx_floor = 1e-30 * (1.0 + b.squaredNorm());

  int it = 0;
  for (; it < opts.max_iterations;) {
    ++it;
    grad.noalias() = a * (a.transpose() * y - b);
    z = y - grad / lip;
    proj.project(z);
    residual.noalias() = a.transpose() * z - b;
    const double fz = 0.5 * residual.squaredNorm();
    if (!std::isfinite(fz)) throw NumericError("subsolver produced a non-finite objective");
    const double mapping = (z - y).norm();
    const bool y_is_x = (t == 1.0);

    if (fz > fx) {
      // Momentum overshot: restart from the best iterate.
      if (y_is_x) {
        out.converged = true;
        break;
      }
      y = x;
      t = 1.0;
      continue;
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = z + ((t - 1.0) / t_next) * (z - x);
    x = z;
    fx = fz;
    t = t_next;

    if (fx <= fx_floor || mapping <= opts.fixed_point_tolerance * (1.0 + x.norm())) {
      out.converged = true;
      break;
    }
    if (++window_count == SubsolverOptions::kStagnationWindow) {
      if (window_start - fx <= opts.objective_tolerance * window_start &&
          mapping <= SubsolverOptions::kCertificateTolerance * (1.0 + x.norm())) {
        out.converged = true;
        break;
      }
      window_start = fx;
      window_count = 0;
    }
  }

  out.v = {d, x};
  out.objective = std::sqrt(2.0 * fx);
  out.iterations = it;
  if (proj.min_eigenvalue(x) < -opts.psd_eigen_tolerance)
    throw NumericError("subsolver iterate left the PSD cone");
  return out;
}

}  // namespace gram_realize
