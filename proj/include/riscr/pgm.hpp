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

#ifndef RISCR_PGM_HPP
#define RISCR_PGM_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "riscr/channel_model.hpp"
#include "riscr/metrics.hpp"
#include "riscr/rng.hpp"
#include "riscr/signal_model.hpp"

namespace riscr {

// Wirtinger gradients of f with respect to conj(theta) and conj(P), at true
// scale. At high SNR every weight may underflow and these return zeros; the
// optimizers use the rescaled directions internally.
CVector grad_theta(const DesignPoint& point, const ChannelSet& channels,
                   const ConstellationTable& table, double noise_var);
CMatrix grad_precoder(const DesignPoint& point, const ChannelSet& channels,
                      const ConstellationTable& table, double noise_var);

// Gradient directions sharing a common scale: true gradient =
// exp(log_scale) * direction. log_scale is 0 unless the true gradient would
// underflow, in which case the dominant weight is normalized to 1.
struct GradientDirection {
    CVector theta;
    CMatrix precoder;
    double log_scale = 0.0;
    ObjectiveValue value;
};

GradientDirection gradient_direction(const DesignPoint& point, const ChannelSet& channels,
                                     const ConstellationTable& table, double noise_var,
                                     bool want_theta, bool want_precoder);

// Nearest unit-modulus vector; zero entries map to 1 (phase 0).
CVector project_theta(const CVector& theta);
// Scale onto Tr(P P^H) = n_streams. Throws std::domain_error for P = 0.
CMatrix project_precoder(const CMatrix& precoder, int n_streams);

double phase_residual(const CVector& theta);                       // max_l |1 - |theta_l||
double power_residual(const CMatrix& precoder, int n_streams);     // |N_r - Tr(P P^H)|

struct PgmParams {
    double initial_step = 1e3;          // L0
    double sufficient_decrease = 1e-3;  // delta
    double shrink = 0.5;                // rho
    int max_iters = 200;                // recorded iterates, including the initial point
    double rel_tol = 1e-8;
    int patience = 3;                   // consecutive small decreases before stopping
    int max_backtracks = 60;
    bool update_theta = true;           // false: precoder-only (no-RIS baseline)

    void validate() const;
};

// True iff after <= before - required holds for f, compared on the
// off-diagonal excess so the test stays exact when f is dominated by the N_s
// diagonal terms or when the excess underflows.
bool sufficient_decrease(const ObjectiveValue& before, const ObjectiveValue& after,
                         double required);

struct LineSearchResult {
    DesignPoint point;
    ObjectiveValue value;
    double step = 0.0;  // mu = L0 rho^k
    int backtracks = 0; // k
    bool stalled = false;
    double step_norm_sq = 0.0;  // ||x_{n+1} - x_n||^2
};

// One projected step on theta with Armijo-Goldstein backtracking.
LineSearchResult line_search_theta(const DesignPoint& current, const ObjectiveValue& value,
                                   const ChannelSet& channels, const ConstellationTable& table,
                                   double noise_var, const PgmParams& params);
// Same for the precoder, with theta already updated.
LineSearchResult line_search_precoder(const DesignPoint& current, const ObjectiveValue& value,
                                      const ChannelSet& channels,
                                      const ConstellationTable& table, double noise_var,
                                      const PgmParams& params);

enum class Termination { RelativeTolerance, MaxIterations, Stalled, Stationary };

std::string_view to_string(Termination t);

struct IterationRecord {
    int iteration = 1;
    DesignPoint point;
    ObjectiveValue value;
    double r0 = 0.0;
    double phase_residual = 0.0;
    double power_residual = 0.0;
    // Step details that produced this iterate (unset for iteration 1).
    double step_theta = 0.0;
    double step_precoder = 0.0;
    int backtracks_theta = 0;
    int backtracks_precoder = 0;
    bool stall_theta = false;
    bool stall_precoder = false;
    double theta_step_norm_sq = 0.0;
    double precoder_step_norm_sq = 0.0;
    // f after the theta half-step, before the precoder update.
    ObjectiveValue mid_value;
};

struct OptimizerTrace {
    std::vector<IterationRecord> records;
    DesignPoint final_point;
    Termination reason = Termination::MaxIterations;
    std::size_t theta_gradient_evals = 0;
    std::size_t inner_iterations = 0;  // SCA only
};

// Random feasible start: i.i.d. uniform phases, CN(0,1) precoder projected
// onto the power sphere.
DesignPoint random_init(int n_ris, int n_tx, int n_streams, Rng& rng);

// Alternating projected gradient: theta step then precoder step per
// iteration. Record 1 is the (projected) initial point.
OptimizerTrace run_pgm(const DesignPoint& init, const ChannelSet& channels,
                       const ConstellationTable& table, double noise_var,
                       const PgmParams& params);

} // namespace riscr

#endif
