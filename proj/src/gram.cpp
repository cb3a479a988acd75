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


#include "gram_realize/gram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gram_realize/errors.hpp"

namespace gram_realize {

void LayoutSpec::validate() const {
  if (d < 1 || W < 1 || V < 1 || K < 2)
    throw InputError("invalid layout (d=" + std::to_string(d) + ", W=" + std::to_string(W) +
                     ", V=" + std::to_string(V) + ", K=" + std::to_string(K) +
                     "); need d>=1, W>=1, V>=1, K>=2");
}

ModelMatrix::ModelMatrix(LayoutSpec layout, RMatrix columns)
    : layout_(layout), cols_(std::move(columns)) {
  layout_.validate();
  if (cols_.rows() != layout_.coord_length() || cols_.cols() != layout_.columns())
    throw InputError("model matrix is " + std::to_string(cols_.rows()) + "x" +
                     std::to_string(cols_.cols()) + ", layout expects " +
                     std::to_string(layout_.coord_length()) + "x" +
                     std::to_string(layout_.columns()));
  if (!cols_.allFinite()) throw NumericError("model matrix has non-finite entries");
}

ModelMatrix ModelMatrix::zero(LayoutSpec layout) {
  layout.validate();
  return ModelMatrix(layout, RMatrix::Zero(layout.coord_length(), layout.columns()));
}

void ModelMatrix::set_column(int i, const Eigen::Ref<const RVector>& coords) {
  if (i < 0 || i >= size()) throw InputError("column index out of range");
  if (coords.size() != cols_.rows()) throw InputError("column length mismatch");
  cols_.col(i) = coords;
}

HermitianMatrix ModelMatrix::operator_at(int i) const {
  if (i < 0 || i >= size()) throw InputError("column index out of range");
  return from_coords(column_vec(i));
}

GramMatrix::GramMatrix(LayoutSpec layout, RMatrix entries)
    : layout_(layout), g_(std::move(entries)) {
  layout_.validate();
  if (g_.rows() != layout_.columns() || g_.cols() != layout_.columns())
    throw InputError("Gram matrix is " + std::to_string(g_.rows()) + "x" +
                     std::to_string(g_.cols()) + ", layout expects M=" +
                     std::to_string(layout_.columns()));
  if (!g_.allFinite()) throw NumericError("Gram matrix has non-finite entries");
  if ((g_ - g_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance)
    throw InputError("Gram matrix is not symmetric");
  if (g_.diagonal().minCoeff() < 0.0) throw InputError("Gram matrix has a negative diagonal entry");
  g_ = 0.5 * (g_ + g_.transpose()).eval();
}

GramMatrix build_gram(const ModelMatrix& p) {
  RMatrix g(p.size(), p.size());
  g.noalias() = p.matrix().transpose() * p.matrix();
  return GramMatrix(p.layout(), 0.5 * (g + g.transpose()));
}

RMatrix data_block(const GramMatrix& g) {
  const auto& l = g.layout();
  return g.matrix().block(0, l.W, l.W, l.V * l.K);
}

RMatrix relative_distances(const GramMatrix& g) {
  const RMatrix& m = g.matrix();
  const int n = g.size();
  RMatrix d(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = std::sqrt(std::max(m(i, i) - 2.0 * m(i, j) + m(j, j), 0.0));
    }
  }
  return d;
}

std::vector<int> nearest_neighbors(const RMatrix& distances, int ind, int n) {
  const int m = static_cast<int>(distances.rows());
  if (distances.cols() != m) throw InputError("distance matrix must be square");
  if (ind < 0 || ind >= m) throw InputError("nearest_neighbors: index out of range");
  if (n < 0 || n > m - 1)
    throw InputError("nearest_neighbors: requested " + std::to_string(n) +
                     " neighbours but only " + std::to_string(m - 1) + " exist");
  std::vector<int> idx;
  idx.reserve(m - 1);
  for (int j = 0; j < m; ++j)
    if (j != ind) idx.push_back(j);
  auto closer = [&](int a, int b) {
    const double da = distances(ind, a), db = distances(ind, b);
    return da < db || (da == db && a < b);
  };
  std::partial_sort(idx.begin(), idx.begin() + n, idx.end(), closer);
  idx.resize(n);
  return idx;
}

namespace {

void check_match(const ModelMatrix& p, const GramMatrix& g) {
  if (!(p.layout() == g.layout())) throw InputError("model and Gram layouts differ");
}

}  // namespace

double gram_error(const ModelMatrix& p, const GramMatrix& g) {
  check_match(p, g);
  const double norm = g.matrix().norm();
  if (norm == 0.0) throw InputError("gram_error: ||G||_F is zero");
  return (p.matrix().transpose() * p.matrix() - g.matrix()).norm() / norm;
}

double max_entry_error(const ModelMatrix& p, const GramMatrix& g) {
  check_match(p, g);
  return (p.matrix().transpose() * p.matrix() - g.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace gram_realize
