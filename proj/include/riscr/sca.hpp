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

#ifndef RISCR_SCA_HPP
#define RISCR_SCA_HPP

#include <cstddef>

#include "riscr/channel_model.hpp"
#include "riscr/metrics.hpp"
#include "riscr/pgm.hpp"
#include "riscr/signal_model.hpp"

namespace riscr {

struct ScaParams {
    int outer_max_iters = 100;  // recorded iterates, including the initial point
    double outer_rel_tol = 1e-8;
    int patience = 3;
    int inner_max_iters = 500;
    double inner_tol = 1e-8;    // gradient-mapping norm of the inner problem
    double boundary_tol = 1e-2;
    bool update_theta = true;

    void validate() const;
};

// First-order expansions of Phi_g around an anchor, one per distinct
// difference gram g:
//
//   Phi~_g(x) = phi_g + 2 Re(slope_g^H (x - anchor)).
//
// Phi_g is a convex quadratic in either block, so every Phi~_g is a global
// minorant that is exact at the anchor. For the precoder block x = vec(P)
// (column-major).
struct PhiLinearization {
    CVector anchor;
    Eigen::VectorXd phi;      // Phi_g at the anchor
    CMatrix slopes;           // dim x G, column g = Wirtinger gradient of Phi_g
    Eigen::VectorXd weights;  // pair multiplicities
    std::size_t n_symbols = 0;

    Eigen::Index dim() const { return anchor.size(); }
    // Phi~_g(x) for every gram.
    Eigen::VectorXd values(const CVector& x) const;
};

// Around P_n with theta_n fixed; slope_g = vec(H^H H P_n e_g e_g^H).
PhiLinearization linearize_phi_precoder(const DesignPoint& anchor, const ChannelSet& channels,
                                        const ConstellationTable& table);
// Around theta_n with P_{n+1} fixed; slope_g = vec_d(H_2^H H P e e^H P^H Hbar_1^H).
PhiLinearization linearize_phi_theta(const DesignPoint& anchor, const ChannelSet& channels,
                                     const ConstellationTable& table);

// Surrogate sum_{i,j} exp(-Phi~_ij(x) / 4 sigma^2), in the same split form as f.
ObjectiveValue surrogate_value(const PhiLinearization& lin, const CVector& x, double noise_var);

struct InnerStats {
    int iterations = 0;
    double mapping_norm = 0.0;
    bool converged = false;
    ObjectiveValue start;
    ObjectiveValue end;
};

struct PrecoderStep {
    CMatrix precoder;
    InnerStats stats;
};

struct ThetaStep {
    CVector theta;
    InnerStats stats;
};

// Minimize the surrogate over the Frobenius ball Tr(P P^H) <= n_streams.
PrecoderStep solve_subproblem_precoder(const PhiLinearization& lin, Eigen::Index n_tx,
                                       int n_streams, double noise_var, const ScaParams& params);
// Minimize the surrogate over the unit polydisk |theta_l| <= 1.
ThetaStep solve_subproblem_theta(const PhiLinearization& lin, double noise_var,
                                 const ScaParams& params);

// Alternating precoder / theta surrogate minimization on the relaxed problem.
OptimizerTrace run_sca(const DesignPoint& init, const ChannelSet& channels,
                       const ConstellationTable& table, double noise_var,
                       const ScaParams& params);

struct BoundaryReport {
    double phase_residual = 0.0;  // max_l |1 - |theta_l||
    double power_residual = 0.0;  // |N_r - Tr(P P^H)|
    bool pass = false;
};

BoundaryReport boundary_check(const DesignPoint& point, int n_streams, double tol);

} // namespace riscr

#endif
