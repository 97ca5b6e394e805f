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

#ifndef DVS_DRIFT_FIELD_HPP
#define DVS_DRIFT_FIELD_HPP

#include <cstdint>
#include <functional>
#include <utility>

#include "dvs/state.hpp"

namespace dvs {

/// Pure drift function f(state, t). Must return a value of the same shape
/// as `state` and be deterministic.
using DriftFunction = std::function<SystemState(const SystemState&, double)>;

/// Instrumented drift field. Every call to eval() adds the number of state
/// components (node, and edge when present) to the evaluation counter, so
/// the counter is the NFE in "per component" units.
///
/// Copies carry their own counter; give each trajectory its own instance.
class DriftField {
 public:
  DriftField() = default;
  explicit DriftField(DriftFunction fn) : fn_(std::move(fn)) {}

  SystemState eval(const SystemState& state, double t);

  std::uint64_t eval_count() const noexcept { return count_; }
  void reset_count() noexcept { count_ = 0; }

  explicit operator bool() const noexcept { return static_cast<bool>(fn_); }

 private:
  DriftFunction fn_;
  std::uint64_t count_ = 0;
};

}  // namespace dvs

#endif  // DVS_DRIFT_FIELD_HPP
