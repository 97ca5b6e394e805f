// Copyright 2026 The DVS Sampler Authors
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

#ifndef DVS_METRICS_HPP
#define DVS_METRICS_HPP

#include <Eigen/Core>

#include <optional>
#include <span>
#include <vector>

#include "dvs/state.hpp"

namespace dvs {

/// W2 distance between diagonal Gaussians given per-dimension means and
/// variances: sqrt(||mu1 - mu2||^2 + sum_d (sigma1_d - sigma2_d)^2).
double gaussian_w2(const Vector& mean1, const Vector& var1, const Vector& mean2,
                   const Vector& var2);

struct EmpiricalMoments {
  Vector mean;
  Vector var;   ///< Population variance (divides by n).
};

/// Per-dimension mean and variance. Throws StructuralError on empty input or
/// ragged sizes.
EmpiricalMoments empirical_moments(std::span<const Vector> samples);

/// Median of pairwise Euclidean distances over the pooled samples; 1 when
/// every distance is zero or there is a single sample.
double median_heuristic_bandwidth(std::span<const Vector> p, std::span<const Vector> q);

/// Biased (V-statistic) MMD with k(x, y) = exp(-||x - y||^2 / (2 h^2)),
/// returned as sqrt(max(0, MMD^2)). Vectors of different lengths are
/// zero-padded to the longest.
double mmd_rbf(std::span<const Vector> p, std::span<const Vector> q, double bandwidth);

/// Counts of nodes with degree 0..n-1, padded with zeros to `length` when
/// larger. Throws StructuralError unless `adjacency` is square and symmetric.
Vector degree_histogram(const Eigen::MatrixXd& adjacency, Eigen::Index length = 0);

/// Ascending eigenvalues of L = D - A.
Vector laplacian_spectrum(const Eigen::MatrixXd& adjacency);

/// Entries >= 0.5 become 1, others 0; the diagonal is cleared.
Eigen::MatrixXd threshold_adjacency(const Eigen::MatrixXd& weights);

/// Reshapes a row-major flattened n x n edge part.
Eigen::MatrixXd unflatten_adjacency(const Vector& flat);

struct GraphMmd {
  double mmd_degree = 0.0;
  double mmd_spectral = 0.0;
  double bandwidth_degree = 0.0;
  double bandwidth_spectral = 0.0;
};

/// Degree-histogram and Laplacian-spectrum MMDs between two sets of 0/1
/// adjacency matrices. Without a bandwidth the median heuristic is used per
/// descriptor.
GraphMmd graph_summary_mmd(std::span<const Eigen::MatrixXd> generated,
                           std::span<const Eigen::MatrixXd> reference,
                           std::optional<double> bandwidth = std::nullopt);

}  // namespace dvs

#endif  // DVS_METRICS_HPP
