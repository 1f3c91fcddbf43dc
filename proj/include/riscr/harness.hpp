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

#ifndef RISCR_HARNESS_HPP
#define RISCR_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "riscr/config.hpp"
#include "riscr/csv.hpp"

namespace riscr {

// Per-arm outcome over all realizations. Vectors are indexed by realization.
struct ArmSummary {
    std::string run_id;
    std::string method;  // "PGM", "SCA", "PGM-noRIS", "SCA-noRIS"
    bool ris_enabled = true;
    std::vector<double> final_r0;
    std::vector<double> final_mi;
    std::vector<double> final_mi_stderr;
    std::vector<double> final_mi_lower_bound;
    std::vector<double> final_gaussian_rate;
    std::vector<double> final_gaussian_ref;
    std::vector<int> iterations;
    std::vector<std::string> termination;
    std::vector<double> wall_time;
    std::size_t theta_gradient_evals = 0;
    double max_phase_residual = 0.0;  // at the converged points
    double max_power_residual = 0.0;

    double mean_r0() const;
    double mean_mi() const;
    double mean_mi_stderr() const;
    double mean_gaussian_rate() const;
    double mean_gaussian_ref() const;
    double mean_iterations() const;
};

struct GradCheckReport {
    int points = 0;
    double max_rel_error_theta = 0.0;
    double max_rel_error_precoder = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ExperimentResult {
    std::vector<RunRecord> records;
    std::vector<ArmSummary> arms;
    std::optional<GradCheckReport> gradcheck;
    bool passed = true;

    const ArmSummary* find(const std::string& run_id, const std::string& method) const;
};

double mean(const std::vector<double>& v);

// Optimizes every realization with the configured method(s). Both methods
// see the same channel draw, the same random start and the same MI noise.
ExperimentResult run_experiment(const ExperimentConfig& config);
// Precoder-only optimization with the RIS removed from the channel.
ExperimentResult run_no_ris_baseline(const ExperimentConfig& config);
// Cartesian grid over config.sweep_grid ("key=v1,v2;key2=w1,w2"); one
// run_experiment per grid point, run_id "key=v1,key2=w1".
ExperimentResult run_sweep(const ExperimentConfig& config);
// Analytic vs central finite-difference gradients on small instances
// (N_s <= 64, N_ris <= 16).
GradCheckReport gradcheck(const ExperimentConfig& config);
// Direct link present ("fig2a") and blocked ("fig2b"), PGM and SCA with and
// without the RIS.
ExperimentResult reproduce_fig2(const ExperimentConfig& config);
// PGM with M = 4 and M = 16 for both direct-link cases ("fig3a-M4", ...).
ExperimentResult reproduce_fig3(const ExperimentConfig& config);

std::string format_summary(const ExperimentResult& result);

} // namespace riscr

#endif
