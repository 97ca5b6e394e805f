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

#include "dvs/state.hpp"

#include <cmath>
#include <string>

#include "dvs/errors.hpp"

namespace dvs {

SystemState SystemState::zeros_like(const SystemState& other) {
  SystemState out(Vector::Zero(other.node.size()));
  if (other.edge) out.edge = Vector::Zero(other.edge->size());
  return out;
}

bool SystemState::same_shape(const SystemState& other) const noexcept {
  if (node.size() != other.node.size()) return false;
  if (has_edge() != other.has_edge()) return false;
  return !edge || edge->size() == other.edge->size();
}

bool SystemState::all_finite() const noexcept {
  if (!node.allFinite()) return false;
  return !edge || edge->allFinite();
}

double SystemState::squared_norm() const noexcept {
  double s = node.squaredNorm();
  if (edge) s += edge->squaredNorm();
  return s;
}

double SystemState::norm() const noexcept { return std::sqrt(squared_norm()); }

void require_same_shape(const SystemState& a, const SystemState& b,
                        const char* what) {
  if (!a.same_shape(b)) {
    throw StructuralError(std::string(what) + ": shape mismatch (node " +
                          std::to_string(a.node_dim()) + " vs " +
                          std::to_string(b.node_dim()) + ", edge " +
                          std::to_string(a.edge_dim()) + " vs " +
                          std::to_string(b.edge_dim()) + ")");
  }
}

}  // namespace dvs
