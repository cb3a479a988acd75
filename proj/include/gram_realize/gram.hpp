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

#include <vector>

#include "gram_realize/hermitian.hpp"

namespace gram_realize {

// Dimensions of a state/measurement family: W states, V measurements with K
// outcomes each, all on a d-dimensional Hilbert space.
struct LayoutSpec {
  int d = 0;
  int W = 0;
  int V = 0;
  int K = 0;

  int columns() const { return W + V * K; }
  int coord_length() const { return d * d; }
  // 0-based column index of effect k of measurement v.
  int effect_index(int v, int k) const { return W + v * K + k; }

  void validate() const;
  bool operator==(const LayoutSpec&) const = default;
};

// Real d^2 x M matrix whose columns are coordinate vectors of the states
// (first W columns) followed by the effects in (v, k) lexicographic order.
class ModelMatrix {
 public:
  ModelMatrix(LayoutSpec layout, RMatrix columns);
  static ModelMatrix zero(LayoutSpec layout);

  const LayoutSpec& layout() const { return layout_; }
  int size() const { return layout_.columns(); }

  const RMatrix& matrix() const { return cols_; }
  auto column(int i) const { return cols_.col(i); }
  HermVec column_vec(int i) const { return {layout_.d, cols_.col(i)}; }
  void set_column(int i, const Eigen::Ref<const RVector>& coords);
  HermitianMatrix operator_at(int i) const;

 private:
  LayoutSpec layout_;
  RMatrix cols_;
};

// Symmetric M x M matrix of Hilbert-Schmidt inner products.
class GramMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-10;

  GramMatrix(LayoutSpec layout, RMatrix entries);

  const LayoutSpec& layout() const { return layout_; }
  int size() const { return static_cast<int>(g_.rows()); }
  const RMatrix& matrix() const { return g_; }
  double operator()(int i, int j) const { return g_(i, j); }

 private:
  LayoutSpec layout_;
  RMatrix g_;
};

GramMatrix build_gram(const ModelMatrix& p);

// Upper-right W x (V K) block: outcome probabilities tr(E_vk rho_w).
RMatrix data_block(const GramMatrix& g);

// D(i,j) = sqrt(max(G_ii - 2 G_ij + G_jj, 0)).
RMatrix relative_distances(const GramMatrix& g);

// The n indices j != ind with the smallest distances(ind, j); ties go to the
// smaller index.
std::vector<int> nearest_neighbors(const RMatrix& distances, int ind, int n);

// ||P^T P - G||_F / ||G||_F.
double gram_error(const ModelMatrix& p, const GramMatrix& g);
// max_ij |(P^T P)_ij - G_ij|.
double max_entry_error(const ModelMatrix& p, const GramMatrix& g);

}  // namespace gram_realize
