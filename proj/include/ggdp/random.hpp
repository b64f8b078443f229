//
// Copyright 2026 The ggdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef GGDP_RANDOM_HPP_
#define GGDP_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace ggdp {

namespace internal {

// SplitMix64 finalizer. Full-avalanche mixing of a 64-bit word; used to
// derive child seeds so that nearby (seed, index) pairs land far apart.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace internal

// Seeded, counted source of uniform variates. Two streams constructed from
// the same seed produce bit-identical draw sequences. A stream must not be
// shared between concurrent callers; parallel work takes split() children.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed)
      : seed_(seed), position_(0), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Number of raw 64-bit draws made so far.
  std::uint64_t position() const { return position_; }

  // Deterministic child stream for the given index. Children of one parent
  // are pairwise decorrelated regardless of index spacing.
  RandomStream split(std::uint64_t index) const {
    return RandomStream(
        internal::mix64(seed_ + 0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  std::uint64_t next_u64() {
    ++position_;
    return engine_();
  }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1); safe to pass to log().
  double next_open_double() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  bool next_bool() { return (next_u64() & 1ULL) != 0; }

 private:
  std::uint64_t seed_;
  std::uint64_t position_;
  std::mt19937_64 engine_;
};

}  // namespace ggdp

#endif  // GGDP_RANDOM_HPP_
