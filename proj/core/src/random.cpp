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

#include "dvs/random.hpp"

#include <cmath>
#include <numbers>

#include "dvs/errors.hpp"

namespace dvs {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// 53 random bits mapped to the open interval (0, 1).
inline double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

RandomStream RandomStream::substream(std::uint64_t index) const noexcept {
  return RandomStream(seed_, splitmix64(chain_id_ ^ splitmix64(index + 1)));
}

std::array<double, 2> RandomStream::next_uniform_pair() noexcept {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(counter_),
      static_cast<std::uint32_t>(counter_ >> 32),
      static_cast<std::uint32_t>(chain_id_),
      static_cast<std::uint32_t>(chain_id_ >> 32)};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  ++counter_;
  const auto out = philox4x32(ctr, key);
  const std::uint64_t a = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  const std::uint64_t b = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  return {to_open_unit(a), to_open_unit(b)};
}

void RandomStream::fill_normals(double* out, std::size_t n) noexcept {
  std::size_t i = 0;
  while (i < n) {
    const auto [u1, u2] = next_uniform_pair();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    out[i++] = r * std::cos(theta);
    if (i < n) out[i++] = r * std::sin(theta);
  }
}

Vector gaussian_draw(RandomStream& stream, std::size_t n) {
  if (n == 0) throw StructuralError("gaussian_draw: n must be at least 1");
  Vector v(static_cast<Eigen::Index>(n));
  stream.fill_normals(v.data(), n);
  return v;
}

}  // namespace dvs
