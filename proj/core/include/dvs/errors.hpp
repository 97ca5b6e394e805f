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

#ifndef DVS_ERRORS_HPP
#define DVS_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dvs {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or dimensions of two operands disagree, or an input violates a
/// structural precondition (empty list, asymmetric adjacency, ...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A state became non-finite during integration.
class NumericOverflowError : public Error {
 public:
  NumericOverflowError(const std::string& what, std::int64_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

/// Invalid configuration or parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition (e.g. stepping past the horizon).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Drift evaluated at a singular time (bridge pin).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// The scaling probe cannot form a ratio because the noise level does not move.
class DegenerateProbeError : public Error {
 public:
  using Error::Error;
};

/// The adaptive loop failed to reach the horizon within its step budget.
class RunawayLoopError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A chain aborted inside a multi-chain run.
class ChainError : public Error {
 public:
  ChainError(const std::string& what, std::uint64_t chain)
      : Error("chain " + std::to_string(chain) + ": " + what), chain_(chain) {}

  std::uint64_t chain() const noexcept { return chain_; }

 private:
  std::uint64_t chain_;
};

}  // namespace dvs

#endif  // DVS_ERRORS_HPP
