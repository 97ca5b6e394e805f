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

#ifndef DVS_NOISE_SCHEDULE_HPP
#define DVS_NOISE_SCHEDULE_HPP

#include <string>
#include <string_view>

namespace dvs {

enum class ScheduleKind { kConstant, kLinear, kCosine };

std::string_view to_string(ScheduleKind kind) noexcept;
ScheduleKind parse_schedule_kind(std::string_view name);

/// Diffusion coefficient g(t) over [0, T] with its closed-form derivative.
///
///   constant: g(t) = a
///   linear:   g(t) = a + (b - a) t / T
///   cosine:   g(t) = b_min + (a_max - b_min) (1 + cos(pi t / T)) / 2
///
/// For cosine, `start` is g(0) = g_max and `end` is g(T) = g_min.
class NoiseSchedule {
 public:
  NoiseSchedule() = default;

  ScheduleKind kind() const noexcept { return kind_; }
  double horizon() const noexcept { return horizon_; }
  double start() const noexcept { return start_; }
  double end() const noexcept { return end_; }

  double g(double t) const noexcept;
  double g_dot(double t) const noexcept;

 private:
  friend NoiseSchedule make_schedule(ScheduleKind, double, double, double);

  ScheduleKind kind_ = ScheduleKind::kConstant;
  double horizon_ = 1.0;
  double start_ = 1.0;
  double end_ = 1.0;
};

/// Builds a schedule. `g0`/`g1` are the values at t = 0 and t = T
/// (for constant only `g0` is used; for cosine g0 = g_max, g1 = g_min).
/// Throws ConfigError on nonpositive parameters or horizon.
NoiseSchedule make_schedule(ScheduleKind kind, double horizon, double g0,
                            double g1 = 0.0);

}  // namespace dvs

#endif  // DVS_NOISE_SCHEDULE_HPP
