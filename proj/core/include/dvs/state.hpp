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

#ifndef DVS_STATE_HPP
#define DVS_STATE_HPP

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <utility>

namespace dvs {

using Vector = Eigen::VectorXd;

/// The evolving sample. A flat node part, plus an optional edge part for
/// graph-structured systems (a row-major n x n adjacency flattened).
///
/// The same type is used for drifts and noise draws, which share the shape
/// of the state they act on.
struct SystemState {
  Vector node;
  std::optional<Vector> edge;

  SystemState() = default;
  explicit SystemState(Vector node_part) : node(std::move(node_part)) {}
  SystemState(Vector node_part, Vector edge_part)
      : node(std::move(node_part)), edge(std::move(edge_part)) {}

  static SystemState zeros_like(const SystemState& other);

  /// 1 for flat systems, 2 when an edge part is present.
  int components() const noexcept { return edge ? 2 : 1; }
  bool has_edge() const noexcept { return edge.has_value(); }

  std::ptrdiff_t node_dim() const noexcept { return node.size(); }
  std::ptrdiff_t edge_dim() const noexcept { return edge ? edge->size() : 0; }
  std::ptrdiff_t total_dim() const noexcept { return node_dim() + edge_dim(); }

  bool same_shape(const SystemState& other) const noexcept;
  bool all_finite() const noexcept;

  /// Euclidean norm over both parts.
  double norm() const noexcept;
  double squared_norm() const noexcept;
};

/// Throws StructuralError naming `what` when the shapes differ.
void require_same_shape(const SystemState& a, const SystemState& b,
                        const char* what);

}  // namespace dvs

#endif  // DVS_STATE_HPP
