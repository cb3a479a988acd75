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


#include <doctest.h>

#include <cmath>
#include <random>

#include "gram_realize/errors.hpp"
#include "gram_realize/hermitian.hpp"
#include "test_support.hpp"

using namespace gram_realize;
using testing::random_hermitian;
using testing::random_psd;
using testing::trace_product;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("identity maps to (sqrt(d), 0, ..., 0)") {
  for (int d = 1; d <= 4; ++d) {
    const HermVec v = to_coords(HermitianMatrix::identity(d));
    CHECK(v.coords(0) == doctest::Approx(std::sqrt(static_cast<double>(d))).epsilon(1e-15));
    CHECK(v.coords.tail(d * d - 1).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("zero matrix and zero vector map to each other") {
  CHECK(to_coords(HermitianMatrix::zero(3)).coords.isZero(0.0));
  const HermitianMatrix z = from_coords(HermVec{3, RVector::Zero(9)});
  CHECK(z.entries().isZero(0.0));
}

TEST_CASE("basis is orthonormal under tr(AB)") {
  for (int d = 1; d <= 4; ++d) {
    for (int a = 0; a < d * d; ++a) {
      const CMatrix ba = basis_element(d, a);
      CHECK(max_abs(ba - ba.adjoint()) == 0.0);
      for (int b = 0; b < d * d; ++b) {
        const double expected = a == b ? 1.0 : 0.0;
        CHECK(std::abs(trace_product(ba, basis_element(d, b)) - expected) <= 1e-14);
      }
    }
  }
}

TEST_CASE("coordinate dot product equals tr(AB)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const CMatrix a = random_hermitian(3, rng), b = random_hermitian(3, rng);
    const double dot =
        to_coords(HermitianMatrix(a)).coords.dot(to_coords(HermitianMatrix(b)).coords);
    CHECK(std::abs(dot - trace_product(a, b)) <= 1e-12);
  }
}

TEST_CASE("from_coords of (sqrt 2, 0, 0, 0) is the qubit identity") {
  RVector c = RVector::Zero(4);
  c(0) = std::sqrt(2.0);
  CHECK(max_abs(from_coords(HermVec{2, c}).entries() - CMatrix::Identity(2, 2)) <= 1e-15);
}

TEST_CASE("round trip on random d=4 matrices") {
  std::mt19937_64 rng(12);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const HermitianMatrix h(random_hermitian(4, rng));
    worst = std::max(worst, max_abs(from_coords(to_coords(h)).entries() - h.entries()));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("from_coords rejects a length mismatch") {
  CHECK_THROWS_AS(from_coords(HermVec{2, RVector::Zero(5)}), InputError);
  CHECK_THROWS_AS(from_coords(HermVec{0, RVector::Zero(0)}), InputError);
}

TEST_CASE("HermitianMatrix construction") {
  SUBCASE("non-square and non-Hermitian inputs are rejected") {
    CHECK_THROWS_AS(HermitianMatrix(CMatrix::Zero(2, 3)), InputError);
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(HermitianMatrix{m}, InputError);
  }
  SUBCASE("round-off below tolerance is symmetrized away") {
    CMatrix m = CMatrix::Identity(2, 2);
    m(0, 1) = Complex(0.5, 1e-13);
    m(1, 0) = Complex(0.5, 0.0);
    const HermitianMatrix h(m);
    CHECK(h(0, 1) == std::conj(h(1, 0)));
  }
  SUBCASE("non-finite entries are a numeric error") {
    CMatrix m = CMatrix::Identity(2, 2);
    m(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(HermitianMatrix{m}, NumericError);
  }
}

TEST_CASE("hs_inner examples") {
  const auto p0 = HermitianMatrix::basis_projector(2, 0);
  const auto p1 = HermitianMatrix::basis_projector(2, 1);
  CHECK(hs_inner(p0, p1) == 0.0);
  CHECK(hs_inner(p0, p0) == 1.0);

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix rho = random_psd(2, rng);
    rho /= rho.trace();
    const HermitianMatrix mixed(0.5 * CMatrix::Identity(2, 2));
    CHECK(hs_inner(mixed, HermitianMatrix(rho)) == doctest::Approx(0.5).epsilon(1e-14));
  }
  CHECK_THROWS_AS(hs_inner(p0, HermitianMatrix::identity(3)), InputError);
}

TEST_CASE("hs_inner is symmetric") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const HermitianMatrix a(random_hermitian(3, rng)), b(random_hermitian(3, rng));
    CHECK(std::abs(hs_inner(a, b) - hs_inner(b, a)) <= 1e-14);
  }
}

TEST_CASE("project_psd examples") {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  CHECK(max_abs(project_psd(HermitianMatrix(m)).entries() - expected) <= 1e-15);

  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const HermitianMatrix q(random_psd(3, rng));
    CHECK(max_abs(project_psd(q).entries() - q.entries()) <= 1e-13);
  }
}

TEST_CASE("project_psd beats 1000 random PSD candidates") {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix h = random_hermitian(3, rng);
    const double ours = testing::frobenius_distance(h, project_psd(HermitianMatrix(h)).entries());
    for (int s = 0; s < 1000; ++s) {
      const int rank = 1 + s % 3;
      const CMatrix q = random_psd(3, rng, rank, 0.5 + 0.001 * s);
      CHECK(ours <= testing::frobenius_distance(h, q) + 1e-12);
    }
  }
}

TEST_CASE("project_psd is idempotent and lands in the cone") {
  std::mt19937_64 rng(17);
  for (int d = 1; d <= 4; ++d) {
    for (int trial = 0; trial < 100; ++trial) {
      const HermitianMatrix h(random_hermitian(d, rng));
      const HermitianMatrix p = project_psd(h);
      CHECK(min_eigenvalue(p) >= -1e-12);
      CHECK(max_abs(project_psd(p).entries() - p.entries()) <= 1e-12);
    }
  }
}

TEST_CASE("PsdProjector agrees with project_psd") {
  std::mt19937_64 rng(18);
  PsdProjector proj(3);
  for (int trial = 0; trial < 50; ++trial) {
    const HermitianMatrix h(random_hermitian(3, rng));
    RVector c = to_coords(h).coords;
    proj.project(c);
    CHECK((c - to_coords(project_psd(h)).coords).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("min_eigenvalue examples") {
  CHECK(min_eigenvalue(HermitianMatrix::identity(2)) == doctest::Approx(1.0));
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = -2.0;
  CHECK(min_eigenvalue(HermitianMatrix(m)) == doctest::Approx(-2.0));
  CHECK(std::abs(min_eigenvalue(HermitianMatrix::basis_projector(2, 0))) <= 1e-15);
}
