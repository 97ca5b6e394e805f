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

#include "dvs/drift_field.hpp"

namespace dvs {

SystemState DriftField::eval(const SystemState& state, double t) {
  SystemState out = fn_(state, t);
  require_same_shape(state, out, "drift field");
  count_ += static_cast<std::uint64_t>(state.components());
  return out;
}

}  // namespace dvs
