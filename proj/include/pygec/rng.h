// Copyright 2026 The pygec Authors
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

#ifndef PYGEC_RNG_H_
#define PYGEC_RNG_H_

#include <array>
#include <cstdint>

namespace pygec {

// Portable deterministic generator: xoshiro256** whose 256-bit state is
// filled by four successive splitmix64 outputs of the seed. Every derived
// draw below is specified exactly so datasets reproduce bit-for-bit on any
// platform (std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t Next();

  // Uniform double in [0, 1) from the top 53 bits of one draw.
  double NextDouble();

  // Uniform integer in [0, n), n > 0. Rejection sampling on `Next() % n`
  // with threshold (2^64 - n) mod n.
  uint64_t Uniform(uint64_t n);

  // Consumes exactly one draw: NextDouble() < p.
  bool Bernoulli(double p);

  // Seed of the independent substream for item `index`:
  // Mix(seed ^ Mix(index + 1)), Mix = splitmix64 finalizer.
  static uint64_t SubstreamSeed(uint64_t seed, uint64_t index);

  static uint64_t SplitMix64(uint64_t& state);

 private:
  std::array<uint64_t, 4> s_;
};

}  // namespace pygec

#endif  // PYGEC_RNG_H_
