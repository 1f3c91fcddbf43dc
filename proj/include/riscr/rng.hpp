// SPDX-License-Identifier: Apache-2.0
//
// riscr - cutoff-rate optimization for RIS-aided MIMO links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISCR_RNG_HPP
#define RISCR_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include "riscr/types.hpp"

namespace riscr {

using Rng = std::mt19937_64;

// Stream tags used when deriving independent substreams from one base seed.
enum class Stream : std::uint64_t {
    Channel = 1,
    Init = 2,
    Noise = 3,
    NoiseFinal = 4,
    GradCheck = 5,
};

// Counter-based seed derivation (SplitMix64 chained over the path). The
// result depends only on the base seed and the path, so a realization or
// symbol index always gets the same stream regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

inline std::uint64_t derive_seed(std::uint64_t base, Stream tag,
                                 std::initializer_list<std::uint64_t> path = {})
{
    std::uint64_t s = derive_seed(base, {static_cast<std::uint64_t>(tag)});
    return path.size() ? derive_seed(s, path) : s;
}

// Circularly-symmetric complex Gaussian with unit variance, CN(0, 1).
cplx complex_normal(Rng& rng);

} // namespace riscr

#endif
