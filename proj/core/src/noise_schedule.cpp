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

#include "dvs/noise_schedule.hpp"

#include <cmath>
#include <numbers>

#include "dvs/errors.hpp"

namespace dvs {

std::string_view to_string(ScheduleKind kind) noexcept {
  switch (kind) {
    case ScheduleKind::kConstant:
      return "constant";
    case ScheduleKind::kLinear:
      return "linear";
    case ScheduleKind::kCosine:
      return "cosine";
  }
  return "unknown";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "constant") return ScheduleKind::kConstant;
  if (name == "linear") return ScheduleKind::kLinear;
  if (name == "cosine") return ScheduleKind::kCosine;
  throw ConfigError("unknown noise schedule kind '" + std::string(name) + "'");
}

double NoiseSchedule::g(double t) const noexcept {
  switch (kind_) {
    case ScheduleKind::kConstant:
      return start_;
    case ScheduleKind::kLinear:
      return start_ + (end_ - start_) * t / horizon_;
    case ScheduleKind::kCosine:
      return end_ + (start_ - end_) * 0.5 *
                        (1.0 + std::cos(std::numbers::pi * t / horizon_));
  }
  return start_;
}

double NoiseSchedule::g_dot(double t) const noexcept {
  switch (kind_) {
    case ScheduleKind::kConstant:
      return 0.0;
    case ScheduleKind::kLinear:
      return (end_ - start_) / horizon_;
    case ScheduleKind::kCosine:
      return -(start_ - end_) * 0.5 * std::numbers::pi / horizon_ *
             std::sin(std::numbers::pi * t / horizon_);
  }
  return 0.0;
}

NoiseSchedule make_schedule(ScheduleKind kind, double horizon, double g0,
                            double g1) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("noise schedule horizon must be positive");
  }
  if (!(g0 > 0.0) || !std::isfinite(g0)) {
    throw ConfigError("noise schedule parameters must be positive");
  }
  if (kind != ScheduleKind::kConstant && (!(g1 > 0.0) || !std::isfinite(g1))) {
    throw ConfigError("noise schedule parameters must be positive");
  }
  NoiseSchedule s;
  s.kind_ = kind;
  s.horizon_ = horizon;
  s.start_ = g0;
  s.end_ = kind == ScheduleKind::kConstant ? g0 : g1;
  return s;
}

}  // namespace dvs
