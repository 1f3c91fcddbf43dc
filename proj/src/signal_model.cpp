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

#include "riscr/signal_model.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace riscr {

namespace {

int gray_decode(int g)
{
    int b = 0;
    for (; g; g >>= 1) {
        b ^= g;
    }
    return b;
}

// Grams of this alphabet family live on a lattice, so rounding to 1e-9 gives
// an exact identity key.
std::vector<long long> gram_key(const CMatrix& gram)
{
    std::vector<long long> key;
    key.reserve(static_cast<std::size_t>(2 * gram.size()));
    for (Eigen::Index c = 0; c < gram.cols(); ++c) {
        for (Eigen::Index r = 0; r < gram.rows(); ++r) {
            key.push_back(std::llround(gram(r, c).real() * 1e9));
            key.push_back(std::llround(gram(r, c).imag() * 1e9));
        }
    }
    return key;
}

} // namespace

std::vector<cplx> build_alphabet(int order, Modulation kind)
{
    if (order < 2) {
        throw std::invalid_argument("constellation order must be at least 2");
    }
    std::vector<cplx> out;
    if (kind == Modulation::Psk || order == 2) {
        for (int k = 0; k < order; ++k) {
            out.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / order));
        }
        if (order == 2) {
            out[1] = {-1.0, 0.0};  // exact BPSK
        }
        return out;
    }

    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    const int bits = static_cast<int>(std::lround(std::log2(static_cast<double>(order))));
    if (side * side != order || (1 << bits) != order) {
        throw std::invalid_argument("QAM order must be 2 or a square power of two, got "
                                    + std::to_string(order));
    }
    const int half = bits / 2;
    const double scale = std::sqrt(2.0 * (order - 1) / 3.0);
    for (int label = 0; label < order; ++label) {
        const int i_level = gray_decode(label >> half);
        const int q_level = gray_decode(label & ((1 << half) - 1));
        out.emplace_back((2 * i_level - side + 1) / scale, (2 * q_level - side + 1) / scale);
    }
    return out;
}

ConstellationTable::ConstellationTable(std::vector<cplx> alphabet, CMatrix vectors,
                                       std::vector<DifferenceGram> grams)
    : alphabet_(std::move(alphabet)), vectors_(std::move(vectors)), grams_(std::move(grams))
{
}

CVector ConstellationTable::difference(std::size_t i, std::size_t j) const
{
    return vectors_.col(static_cast<Eigen::Index>(i)) - vectors_.col(static_cast<Eigen::Index>(j));
}

ConstellationTable enumerate_vectors(std::span<const cplx> alphabet, int n_streams,
                                     std::size_t cap)
{
    if (n_streams < 1) {
        throw std::invalid_argument("number of streams must be at least 1");
    }
    if (alphabet.empty()) {
        throw std::invalid_argument("alphabet must not be empty");
    }
    const std::size_t m = alphabet.size();
    std::size_t n_s = 1;
    for (int k = 0; k < n_streams; ++k) {
        if (n_s > cap / m) {
            throw std::invalid_argument("M^N_r exceeds the configured symbol cap of "
                                        + std::to_string(cap));
        }
        n_s *= m;
    }

    CMatrix vectors(n_streams, static_cast<Eigen::Index>(n_s));
    for (std::size_t i = 0; i < n_s; ++i) {
        std::size_t rest = i;
        for (int k = n_streams - 1; k >= 0; --k) {
            vectors(k, static_cast<Eigen::Index>(i)) = alphabet[rest % m];
            rest /= m;
        }
    }

    std::map<std::vector<long long>, std::size_t> index;
    std::vector<DifferenceGram> grams;
    for (std::size_t i = 0; i < n_s; ++i) {
        for (std::size_t j = 0; j < n_s; ++j) {
            if (i == j) {
                continue;
            }
            CVector e = vectors.col(static_cast<Eigen::Index>(i))
                        - vectors.col(static_cast<Eigen::Index>(j));
            CMatrix gram = e * e.adjoint();
            auto [it, inserted] = index.try_emplace(gram_key(gram), grams.size());
            if (inserted) {
                grams.push_back({std::move(e), std::move(gram), 0});
            }
            ++grams[it->second].multiplicity;
        }
    }
    return ConstellationTable(std::vector<cplx>(alphabet.begin(), alphabet.end()),
                              std::move(vectors), std::move(grams));
}

} // namespace riscr
