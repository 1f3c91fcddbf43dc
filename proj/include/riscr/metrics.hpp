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

#ifndef RISCR_METRICS_HPP
#define RISCR_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <limits>

#include "riscr/channel_model.hpp"
#include "riscr/signal_model.hpp"
#include "riscr/types.hpp"

namespace riscr {

// Value of f = sum_{i,j} exp(-Phi_ij / 4 sigma^2) kept in split form: the N_s
// diagonal terms (each exactly 1) plus the log of the off-diagonal excess.
// Off-diagonal terms routinely underflow individually at realistic SNR; the
// excess is accumulated as a log-sum-exp so R0 stays accurate.
struct ObjectiveValue {
    double log_excess = -std::numeric_limits<double>::infinity();
    std::size_t n_symbols = 0;

    double excess() const;
    double f() const;
    double log_f() const;
    // R0 = 2 log2 N_s - log2 f, in bits per channel use.
    double cutoff_rate() const;
};

// ||H P e||^2.
double phi(const CMatrix& h, const CMatrix& precoder, const CVector& diff);

// Evaluate f from the effective N_r x N_r product HP.
ObjectiveValue evaluate_objective(const CMatrix& hp, const ConstellationTable& table,
                                  double noise_var);
ObjectiveValue evaluate_objective(const DesignPoint& point, const ChannelSet& channels,
                                  const ConstellationTable& table, double noise_var);

double objective_f(const DesignPoint& point, const ChannelSet& channels,
                   const ConstellationTable& table, double noise_var);
double objective_logf(const DesignPoint& point, const ChannelSet& channels,
                      const ConstellationTable& table, double noise_var);
double cutoff_rate(const DesignPoint& point, const ChannelSet& channels,
                   const ConstellationTable& table, double noise_var);
// Cutoff rate at half the noise power.
double cutoff_rate_half_noise(const DesignPoint& point, const ChannelSet& channels,
                              const ConstellationTable& table, double noise_var);

// N_r (1 - log2 e) + R0 at half noise. Not clamped; may be negative.
double mi_lower_bound(double r0_half, int n_streams);

// Sum over all ordered pairs of w_ij e_ij e_ij^H with w_ij = exp(-Phi_ij/4 sigma^2),
// stored as exp(log_scale) * sum so the weights never all underflow.
struct WeightedGram {
    CMatrix sum;
    double log_scale = 0.0;
    ObjectiveValue value;
};

WeightedGram weighted_gram(const CMatrix& hp, const ConstellationTable& table, double noise_var);

struct MiEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

// Monte Carlo mutual information of the discrete-input channel with
// equiprobable symbol vectors. `draws_per_symbol` noise vectors are drawn for
// every transmitted index i from substream derive_seed(seed, {i}), so the
// estimate is reproducible and independent of evaluation order.
MiEstimate mutual_information_mc(const CMatrix& hp, const ConstellationTable& table,
                                 double noise_var, std::size_t draws_per_symbol,
                                 std::uint64_t seed);
MiEstimate mutual_information_mc(const DesignPoint& point, const ChannelSet& channels,
                                 const ConstellationTable& table, double noise_var,
                                 std::size_t draws_per_symbol, std::uint64_t seed);

// log2 det(I + H P P^H H^H / sigma^2).
double gaussian_rate(const CMatrix& h, const CMatrix& precoder, double noise_var);
double gaussian_rate(const DesignPoint& point, const ChannelSet& channels, double noise_var);

// Gaussian-input rate of H with the water-filling covariance under total
// power `power`.
double water_filling_rate(const CMatrix& h, double power, double noise_var);

struct RateReport {
    double r0 = 0.0;
    double mi = 0.0;
    double mi_stderr = 0.0;
    double mi_lower_bound = 0.0;
    double gaussian_rate = 0.0;
    double gaussian_ref = 0.0;
    double f_log = 0.0;
};

RateReport evaluate_rates(const DesignPoint& point, const ChannelSet& channels,
                          const ConstellationTable& table, double noise_var,
                          std::size_t draws_per_symbol, std::uint64_t seed);

} // namespace riscr

#endif
