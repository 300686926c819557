// Copyright 2026 The ppsyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random streams.
//
// All randomness in a run derives from one root seed. Each draw site asks for
// its own substream keyed by (seed, round, tag), so the values a site sees do
// not depend on how many draws other sites made. The samplers below are
// written out rather than taken from <random> distributions, whose algorithms
// are implementation-defined; this keeps outputs identical across standard
// libraries.

#ifndef PPSYN_RNG_HPP_
#define PPSYN_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace ppsyn {

using Engine = std::mt19937_64;

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t round,
                          std::string_view tag);

inline Engine make_stream(std::uint64_t root, std::uint64_t round,
                          std::string_view tag) {
  return Engine(derive_seed(root, round, tag));
}

// Uniform on [0, 1) with 53 random bits.
double uniform01(Engine& rng);

// Uniform integer on [0, bound). bound must be > 0.
std::uint64_t uniform_index(Engine& rng, std::uint64_t bound);

// Standard normal via the polar Box-Muller method (one value per call).
double standard_normal(Engine& rng);

// Standard exponential, rate 1.
double standard_exponential(Engine& rng);

}  // namespace ppsyn

#endif  // PPSYN_RNG_HPP_
