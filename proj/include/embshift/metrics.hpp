// Copyright 2026 The embshift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EMBSHIFT_METRICS_HPP_
#define EMBSHIFT_METRICS_HPP_

#include <cstdint>
#include <vector>

#include "embshift/types.hpp"

namespace embshift::metrics {

// Gaussian fitted to an embedding set: sample mean plus unbiased covariance.
struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;  // symmetric within 1e-12
  Eigen::Index count = 0;

  Eigen::Index dim() const { return mean.size(); }
  void validate() const;
};

// C(i, j) = dendrogram height at which points i and j first share a cluster.
struct CopheneticMatrix {
  Eigen::MatrixXd values;  // n x n symmetric, nonnegative, zero diagonal

  Eigen::Index size() const { return values.rows(); }
  void validate() const;
};

// Mean over matched rows i of 1 - <a_i, b_i> / (|a_i| |b_i|). Sets must be
// aligned; a zero-norm row raises ZeroNormVector naming the clip id.
double mean_cosine_distance(const EmbeddingSet& a, const EmbeddingSet& b);

// Full average-linkage dendrogram over Euclidean distances. Among merges of
// equal height the pair with the lexicographically smallest
// (min member index, max member index) is taken first, so the result is a
// deterministic function of the input rows.
CopheneticMatrix agglomerative_cophenetic(const EmbeddingSet& e);

// 1 - Pearson correlation over the strict upper triangles. Throws
// DegenerateDendrogram when either triangle is constant.
double cpcd(const CopheneticMatrix& co, const CopheneticMatrix& cp);

// Convenience wrapper: clusters both aligned sets and correlates the
// resulting cophenetic matrices. Sets larger than max_points are first
// reduced to the same seeded row subsample, capping the O(n^2) matrices.
double cpcd_between(const EmbeddingSet& a, const EmbeddingSet& b,
                    std::size_t max_points = 4096, std::uint64_t seed = 0);

// Sample mean and unbiased covariance (divisor n - 1), symmetrized.
GaussianStats gaussian_stats(const EmbeddingSet& e);

// Frechet distance between Gaussians:
//   |mu_o - mu_p|^2 + tr(cov_o + cov_p - 2 sqrt(sqrt(cov_o) cov_p sqrt(cov_o)))
// Square roots via symmetric eigendecomposition; eigenvalues below 1e-12 are
// clamped to 0 first and the result is clamped to >= 0.
double fad(const GaussianStats& o, const GaussianStats& p);

// (v - min) / (max - min) elementwise over one shared min/max. Throws
// DegenerateRange when the values do not span a positive range.
std::vector<double> minmax_scale(const std::vector<double>& values);

// First k positions of a seeded Fisher-Yates shuffle of 0..n-1, returned in
// ascending order so row extraction preserves the original clip order.
// Returns all of 0..n-1 when k >= n.
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t k,
                                           std::uint64_t seed);

// Copy with every row scaled to unit Euclidean norm. Throws ZeroNormVector
// naming the first offending clip id.
EmbeddingSet l2_normalized(const EmbeddingSet& e);

}  // namespace embshift::metrics

#endif  // EMBSHIFT_METRICS_HPP_
