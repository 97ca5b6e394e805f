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

#ifndef DVS_RANDOM_HPP
#define DVS_RANDOM_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "dvs/state.hpp"

namespace dvs {

/// Identifier written into run metadata. Bump the suffix whenever the bit
/// stream produced for a given (seed, chain_id, counter) changes.
inline constexpr std::string_view kRngIdentifier =
    "philox4x32-10/box-muller/v1";

/// Philox4x32-10 block function. The 128-bit counter is
/// (counter_lo, counter_hi, chain_lo, chain_hi) and the key is the seed.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based Gaussian stream.
///
/// Every block of the Philox generator yields two 53-bit uniforms in (0, 1),
/// turned into two standard normals with the Box-Muller transform. A request
/// for n normals consumes ceil(n / 2) blocks, i.e. the counter advances by
/// exactly ceil(n / 2); an unused second normal of the last block is dropped.
/// Streams with distinct (seed, chain_id) read disjoint counter spaces.
class RandomStream {
 public:
  RandomStream() = default;
  RandomStream(std::uint64_t seed, std::uint64_t chain_id,
               std::uint64_t counter = 0) noexcept
      : seed_(seed), chain_id_(chain_id), counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t chain_id() const noexcept { return chain_id_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Independent stream for a shard of work; the chain id is scrambled with
  /// the index so shards never share counter space with the parent.
  RandomStream substream(std::uint64_t index) const noexcept;

  /// Two uniforms in the open interval (0, 1); advances the counter by one.
  std::array<double, 2> next_uniform_pair() noexcept;

  /// Fills `out` with standard normals.
  void fill_normals(double* out, std::size_t n) noexcept;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t chain_id_ = 0;
  std::uint64_t counter_ = 0;
};

/// n standard normal draws. Requires n >= 1 (throws StructuralError).
Vector gaussian_draw(RandomStream& stream, std::size_t n);

}  // namespace dvs

#endif  // DVS_RANDOM_HPP
