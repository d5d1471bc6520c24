// Copyright 2026 The condisc Authors.
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

#ifndef CONDISC_SIGNAL_H_
#define CONDISC_SIGNAL_H_

#include <cstdint>

namespace condisc {

// Counter-based randomness. Every draw is a pure function of
// (seed, trial, stream, index), so trials can be replayed or evaluated in
// any order and the stack variables U_L are lazily extendable in L.
class RandomizationSignal {
 public:
  explicit RandomizationSignal(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Correlation value c in [0, 1) for the base game.
  double DrawC(std::uint64_t trial) const { return Uniform(trial, kStreamC, 0); }

  // Stack variable U_level in [0, 1), level >= 1.
  double ULevel(std::uint64_t trial, std::uint64_t level) const {
    return Uniform(trial, kStreamLevel, level);
  }

  // Auxiliary streams (type sampling, noise programs, Monte Carlo).
  double Uniform(std::uint64_t trial, std::uint64_t stream,
                 std::uint64_t index) const {
    return ToUnit(Bits(trial, stream, index));
  }

  std::uint64_t Bits(std::uint64_t trial, std::uint64_t stream,
                     std::uint64_t index) const {
    std::uint64_t h = Mix(seed_ ^ 0x6a09e667f3bcc909ULL);
    h = Mix(h ^ trial);
    h = Mix(h ^ (stream * 0x9e3779b97f4a7c15ULL));
    h = Mix(h ^ index);
    return h;
  }

  static constexpr std::uint64_t kStreamC = 1;
  static constexpr std::uint64_t kStreamLevel = 2;
  static constexpr std::uint64_t kStreamTypes = 3;
  static constexpr std::uint64_t kStreamNoise = 4;
  static constexpr std::uint64_t kStreamMonteCarlo = 5;

  // splitmix64 finalizer.
  static constexpr std::uint64_t Mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr double ToUnit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t seed_;
};

}  // namespace condisc

#endif  // CONDISC_SIGNAL_H_
