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

#ifndef RISCR_SIGNAL_MODEL_HPP
#define RISCR_SIGNAL_MODEL_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "riscr/types.hpp"

namespace riscr {

enum class Modulation { Qam, Psk };

// Unit-average-energy alphabet. QAM accepts M = 2 (BPSK) and square orders
// 4, 16, 64, ...; points are listed in Gray-label order. PSK accepts M >= 2
// with points exp(j 2 pi k / M).
std::vector<cplx> build_alphabet(int order, Modulation kind);

// One distinct off-diagonal difference gram e e^H together with a
// representative difference vector and the number of ordered pairs (i, j),
// i != j, that share it.
struct DifferenceGram {
    CVector diff;
    CMatrix gram;
    std::size_t multiplicity = 0;
};

class ConstellationTable {
public:
    ConstellationTable(std::vector<cplx> alphabet, CMatrix vectors,
                       std::vector<DifferenceGram> grams);

    const std::vector<cplx>& alphabet() const { return alphabet_; }
    // N_r x N_s, column i is x_i.
    const CMatrix& vectors() const { return vectors_; }
    std::size_t n_symbols() const { return static_cast<std::size_t>(vectors_.cols()); }
    std::size_t n_streams() const { return static_cast<std::size_t>(vectors_.rows()); }
    CVector difference(std::size_t i, std::size_t j) const;

    // Deduplicated off-diagonal grams; multiplicities sum to N_s (N_s - 1).
    const std::vector<DifferenceGram>& grams() const { return grams_; }

private:
    std::vector<cplx> alphabet_;
    CMatrix vectors_;
    std::vector<DifferenceGram> grams_;
};

inline constexpr std::size_t kDefaultSymbolCap = 4096;

// All M^N_r vectors in lexicographic order (first stream most significant).
// Throws std::invalid_argument when M^N_r exceeds `cap`.
ConstellationTable enumerate_vectors(std::span<const cplx> alphabet, int n_streams,
                                     std::size_t cap = kDefaultSymbolCap);

} // namespace riscr

#endif
