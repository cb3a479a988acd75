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

#include <complex>

#include <Eigen/Dense>

namespace gram_realize {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// A d x d complex Hermitian operator: a density matrix or a POVM effect.
//
// Construction checks Hermiticity to an absolute tolerance of 1e-12 and stores
// the symmetrized matrix (H + H^dagger) / 2.
class HermitianMatrix {
 public:
  static constexpr double kHermiticityTolerance = 1e-12;

  explicit HermitianMatrix(CMatrix entries);

  static HermitianMatrix zero(int dim);
  static HermitianMatrix identity(int dim);
  // |i><i| in the computational basis.
  static HermitianMatrix basis_projector(int dim, int i);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& entries() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  Complex trace() const { return m_.trace(); }

 private:
  CMatrix m_;
};

// Real coordinates of a Hermitian matrix in the orthonormal basis
// { I/sqrt(d), normalized generalized Gell-Mann matrices }.
struct HermVec {
  int dim = 0;
  RVector coords;
};

// Basis ordering: index 0 is I/sqrt(d); indices 1..d-1 are the diagonal
// Gell-Mann matrices; then, for each pair j < k in row-major order, the
// symmetric and antisymmetric off-diagonal elements.
HermVec to_coords(const HermitianMatrix& h);
HermitianMatrix from_coords(const HermVec& v);

// Raw-storage variants used in inner loops. `coords` must have length d*d.
void to_coords(const CMatrix& h, Eigen::Ref<RVector> coords);
void from_coords(const Eigen::Ref<const RVector>& coords, CMatrix& h);

// The basis element with the given index, as a dense matrix.
CMatrix basis_element(int dim, int index);

// tr(A B). Real for Hermitian arguments.
double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b);

double frobenius_norm(const HermitianMatrix& h);

// Frobenius-nearest PSD matrix: negative eigenvalues are clipped to zero.
HermitianMatrix project_psd(const HermitianMatrix& h);
double min_eigenvalue(const HermitianMatrix& h);

// Reusable workspace for projecting coordinate vectors onto the PSD cone.
class PsdProjector {
 public:
  explicit PsdProjector(int dim);

  int dim() const { return dim_; }

  // In-place projection of a coordinate vector of length dim*dim.
  void project(Eigen::Ref<RVector> coords);
  double min_eigenvalue(const Eigen::Ref<const RVector>& coords);

 private:
  int dim_;
  CMatrix work_;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver_;
};

}  // namespace gram_realize
