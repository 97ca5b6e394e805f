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

#include "dvs/metrics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "dvs/errors.hpp"

namespace dvs {
namespace {

Eigen::Index max_length(std::span<const Vector> p, std::span<const Vector> q) {
  Eigen::Index n = 0;
  for (const auto& v : p) n = std::max(n, v.size());
  for (const auto& v : q) n = std::max(n, v.size());
  return n;
}

Vector padded(const Vector& v, Eigen::Index n) {
  if (v.size() == n) return v;
  Vector out = Vector::Zero(n);
  out.head(v.size()) = v;
  return out;
}

double mean_kernel(std::span<const Vector> a, std::span<const Vector> b,
                   Eigen::Index n, double two_h2) {
  double sum = 0.0;
  for (const auto& x : a) {
    const Vector xp = padded(x, n);
    for (const auto& y : b) sum += std::exp(-(xp - padded(y, n)).squaredNorm() / two_h2);
  }
  return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

void require_symmetric_square(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw StructuralError("adjacency must be square");
  if (a.size() > 0 && (a - a.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    throw StructuralError("adjacency must be symmetric");
  }
}

}  // namespace

double gaussian_w2(const Vector& mean1, const Vector& var1, const Vector& mean2,
                   const Vector& var2) {
  if (mean1.size() != var1.size() || mean1.size() != mean2.size() ||
      mean1.size() != var2.size()) {
    throw StructuralError("gaussian_w2: dimension mismatch");
  }
  if ((var1.array() <= 0.0).any() || (var2.array() <= 0.0).any()) {
    throw ConfigError("gaussian_w2: variances must be positive");
  }
  const double mean_term = (mean1 - mean2).squaredNorm();
  const double sd_term = (var1.cwiseSqrt() - var2.cwiseSqrt()).squaredNorm();
  return std::sqrt(mean_term + sd_term);
}

EmpiricalMoments empirical_moments(std::span<const Vector> samples) {
  if (samples.empty()) throw StructuralError("empirical_moments: no samples");
  const Eigen::Index d = samples.front().size();
  EmpiricalMoments m{Vector::Zero(d), Vector::Zero(d)};
  for (const auto& s : samples) {
    if (s.size() != d) throw StructuralError("empirical_moments: ragged samples");
    m.mean += s;
  }
  const double n = static_cast<double>(samples.size());
  m.mean /= n;
  for (const auto& s : samples) m.var += (s - m.mean).cwiseAbs2();
  m.var /= n;
  return m;
}

double median_heuristic_bandwidth(std::span<const Vector> p, std::span<const Vector> q) {
  const Eigen::Index n = max_length(p, q);
  std::vector<Vector> pooled;
  pooled.reserve(p.size() + q.size());
  for (const auto& v : p) pooled.push_back(padded(v, n));
  for (const auto& v : q) pooled.push_back(padded(v, n));
  std::vector<double> dists;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    for (std::size_t j = i + 1; j < pooled.size(); ++j) {
      dists.push_back((pooled[i] - pooled[j]).norm());
    }
  }
  if (dists.empty()) return 1.0;
  const auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
  std::nth_element(dists.begin(), mid, dists.end());
  double med = *mid;
  if (dists.size() % 2 == 0) {
    med = 0.5 * (med + *std::max_element(dists.begin(), mid));
  }
  return med > 0.0 ? med : 1.0;
}

double mmd_rbf(std::span<const Vector> p, std::span<const Vector> q, double bandwidth) {
  if (p.empty() || q.empty()) throw StructuralError("mmd_rbf: empty sample set");
  if (!(bandwidth > 0.0)) throw ConfigError("mmd_rbf: bandwidth must be positive");
  const Eigen::Index n = max_length(p, q);
  const double two_h2 = 2.0 * bandwidth * bandwidth;
  const double mmd2 = mean_kernel(p, p, n, two_h2) + mean_kernel(q, q, n, two_h2) -
                      2.0 * mean_kernel(p, q, n, two_h2);
  return std::sqrt(std::max(0.0, mmd2));
}

Vector degree_histogram(const Eigen::MatrixXd& adjacency, Eigen::Index length) {
  require_symmetric_square(adjacency);
  const Eigen::Index n = adjacency.rows();
  Vector hist = Vector::Zero(std::max(n, length));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto deg = static_cast<Eigen::Index>(std::lround(adjacency.row(i).sum()));
    if (deg < 0 || deg >= hist.size()) throw StructuralError("degree out of range");
    hist(deg) += 1.0;
  }
  return hist;
}

Vector laplacian_spectrum(const Eigen::MatrixXd& adjacency) {
  require_symmetric_square(adjacency);
  Eigen::MatrixXd lap = -adjacency;
  lap.diagonal() += adjacency.rowwise().sum();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Eigen::MatrixXd threshold_adjacency(const Eigen::MatrixXd& weights) {
  Eigen::MatrixXd a = (weights.array() >= 0.5).cast<double>().matrix();
  a.diagonal().setZero();
  return a;
}

Eigen::MatrixXd unflatten_adjacency(const Vector& flat) {
  const auto n = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(flat.size()))));
  if (n * n != flat.size()) throw StructuralError("edge part is not a square matrix");
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = flat(i * n + j);
  }
  return m;
}

GraphMmd graph_summary_mmd(std::span<const Eigen::MatrixXd> generated,
                           std::span<const Eigen::MatrixXd> reference,
                           std::optional<double> bandwidth) {
  if (generated.empty() || reference.empty()) {
    throw StructuralError("graph_summary_mmd: empty graph set");
  }
  std::vector<Vector> deg_g, deg_r, spec_g, spec_r;
  for (const auto& a : generated) {
    deg_g.push_back(degree_histogram(a));
    spec_g.push_back(laplacian_spectrum(a));
  }
  for (const auto& a : reference) {
    deg_r.push_back(degree_histogram(a));
    spec_r.push_back(laplacian_spectrum(a));
  }
  GraphMmd out;
  out.bandwidth_degree = bandwidth ? *bandwidth : median_heuristic_bandwidth(deg_g, deg_r);
  out.bandwidth_spectral = bandwidth ? *bandwidth : median_heuristic_bandwidth(spec_g, spec_r);
  out.mmd_degree = mmd_rbf(deg_g, deg_r, out.bandwidth_degree);
  out.mmd_spectral = mmd_rbf(spec_g, spec_r, out.bandwidth_spectral);
  return out;
}

}  // namespace dvs
