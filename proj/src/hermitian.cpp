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


#include "gram_realize/hermitian.hpp"

#include <cmath>
#include <string>

#include "gram_realize/errors.hpp"

namespace gram_realize {

namespace {

const double kSqrt2 = std::sqrt(2.0);

void require_finite(const CMatrix& m) {
  if (!m.allFinite()) throw NumericError("matrix has non-finite entries");
}

}  // namespace

HermitianMatrix::HermitianMatrix(CMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1)
    throw InputError("Hermitian matrix must be square with dim >= 1, got " +
                     std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
  require_finite(m_);
  const double skew = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (skew > kHermiticityTolerance)
    throw InputError("matrix is not Hermitian (max |H - H^dagger| = " +
                     std::to_string(skew) + ")");
  m_ = 0.5 * (m_ + m_.adjoint()).eval();
}

HermitianMatrix HermitianMatrix::zero(int dim) {
  return HermitianMatrix(CMatrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  return HermitianMatrix(CMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::basis_projector(int dim, int i) {
  if (i < 0 || i >= dim) throw InputError("basis index out of range");
  CMatrix m = CMatrix::Zero(dim, dim);
  m(i, i) = 1.0;
  return HermitianMatrix(std::move(m));
}

void to_coords(const CMatrix& h, Eigen::Ref<RVector> c) {
  const int d = static_cast<int>(h.rows());
  c(0) = h.diagonal().real().sum() / std::sqrt(static_cast<double>(d));
  double partial = 0.0;
  for (int l = 1; l < d; ++l) {
    partial += h(l - 1, l - 1).real();
    c(l) = (partial - l * h(l, l).real()) / std::sqrt(l * (l + 1.0));
  }
  int a = d;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      c(a++) = kSqrt2 * h(j, k).real();
      c(a++) = -kSqrt2 * h(j, k).imag();
    }
  }
}

void from_coords(const Eigen::Ref<const RVector>& c, CMatrix& h) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(c.size()))));
  h.resize(d, d);
  // Diagonal: walk l downwards accumulating the 1/sqrt(l(l+1)) tail.
  double tail = c(0) / std::sqrt(static_cast<double>(d));
  for (int m = d - 1; m >= 0; --m) {
    double diag = tail;
    if (m >= 1) diag -= m * c(m) / std::sqrt(m * (m + 1.0));
    h(m, m) = diag;
    if (m >= 1) tail += c(m) / std::sqrt(m * (m + 1.0));
  }
  int a = d;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      const Complex z(c(a) / kSqrt2, -c(a + 1) / kSqrt2);
      h(j, k) = z;
      h(k, j) = std::conj(z);
      a += 2;
    }
  }
}

HermVec to_coords(const HermitianMatrix& h) {
  HermVec v{h.dim(), RVector(h.dim() * h.dim())};
  to_coords(h.entries(), v.coords);
  return v;
}

HermitianMatrix from_coords(const HermVec& v) {
  if (v.dim < 1 || v.coords.size() != static_cast<Eigen::Index>(v.dim) * v.dim)
    throw InputError("coordinate vector has length " + std::to_string(v.coords.size()) +
                     ", expected dim^2 = " + std::to_string(v.dim * v.dim));
  if (!v.coords.allFinite()) throw NumericError("coordinate vector has non-finite entries");
  CMatrix h;
  from_coords(v.coords, h);
  return HermitianMatrix(std::move(h));
}

CMatrix basis_element(int dim, int index) {
  if (index < 0 || index >= dim * dim) throw InputError("basis index out of range");
  RVector c = RVector::Zero(dim * dim);
  c(index) = 1.0;
  CMatrix h;
  from_coords(c, h);
  return h;
}

double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw InputError("hs_inner: dimension mismatch");
  // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.entries().array() * b.entries().conjugate().array()).sum().real();
}

double frobenius_norm(const HermitianMatrix& h) { return h.entries().norm(); }

HermitianMatrix project_psd(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.entries());
  if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  const RVector clipped = es.eigenvalues().cwiseMax(0.0);
  CMatrix p = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
  return HermitianMatrix(0.5 * (p + p.adjoint()));
}

double min_eigenvalue(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.entries(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  return es.eigenvalues()(0);
}

PsdProjector::PsdProjector(int dim) : dim_(dim), work_(dim, dim), solver_(dim) {
  if (dim < 1) throw InputError("PsdProjector: dim must be >= 1");
}

void PsdProjector::project(Eigen::Ref<RVector> coords) {
  from_coords(coords, work_);
  solver_.compute(work_);
  if (solver_.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  const auto& evals = solver_.eigenvalues();
  if (!evals.allFinite()) throw NumericError("non-finite eigenvalues in PSD projection");
  if (evals(0) >= 0.0) return;
  int first_positive = 0;
  while (first_positive < dim_ && evals(first_positive) <= 0.0) ++first_positive;
  const int rank = dim_ - first_positive;
  if (rank == 0) {
    coords.setZero();
    return;
  }
  const auto vecs = solver_.eigenvectors().rightCols(rank);
  work_.noalias() =
      vecs * evals.tail(rank).asDiagonal() * vecs.adjoint();
  to_coords(work_, coords);
}

double PsdProjector::min_eigenvalue(const Eigen::Ref<const RVector>& coords) {
  from_coords(coords, work_);
  solver_.compute(work_, Eigen::EigenvaluesOnly);
  if (solver_.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  return solver_.eigenvalues()(0);
}

}  // namespace gram_realize
