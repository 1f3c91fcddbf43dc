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

#include "riscr/sca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riscr {

void ScaParams::validate() const
{
    if (outer_max_iters < 1 || inner_max_iters < 1 || patience < 1) {
        throw std::invalid_argument("SCA iteration limits must be positive");
    }
    if (!(outer_rel_tol >= 0.0) || !(inner_tol > 0.0) || !(boundary_tol > 0.0)) {
        throw std::invalid_argument("SCA tolerances must be positive");
    }
}

Eigen::VectorXd PhiLinearization::values(const CVector& x) const
{
    const CVector delta = x - anchor;
    return phi + 2.0 * (slopes.adjoint() * delta).real();
}

namespace {

Eigen::VectorXd multiplicities(const ConstellationTable& table)
{
    Eigen::VectorXd w(static_cast<Eigen::Index>(table.grams().size()));
    for (std::size_t g = 0; g < table.grams().size(); ++g) {
        w(static_cast<Eigen::Index>(g)) = static_cast<double>(table.grams()[g].multiplicity);
    }
    return w;
}

// log sum_g w_g exp(-Phi~_g(x) / 4 sigma^2); fills the Wirtinger gradient of
// that log-excess when `grad` is given.
double log_surrogate(const PhiLinearization& lin, const CVector& x, double noise_var,
                     CVector* grad)
{
    const Eigen::VectorXd a = lin.values(x) / (4.0 * noise_var);
    const double lo = a.minCoeff();
    const Eigen::VectorXd w = lin.weights.array() * (lo - a.array()).exp();
    const double s = w.sum();
    if (grad) {
        *grad = -(lin.slopes * (w / s).cast<cplx>()) / (4.0 * noise_var);
    }
    return -lo + std::log(s);
}

template <class Project>
InnerStats minimize_surrogate(const PhiLinearization& lin, double noise_var,
                              const ScaParams& params, Project&& project, CVector& x)
{
    InnerStats stats;
    x = lin.anchor;
    stats.start = surrogate_value(lin, x, noise_var);
    stats.end = stats.start;
    if (lin.slopes.cols() == 0) {
        stats.converged = true;
        return stats;
    }

    CVector g;
    double h = log_surrogate(lin, x, noise_var, &g);
    double t = g.norm() > 0.0 ? std::max(1.0, x.norm()) / g.norm() : 1.0;
    for (int it = 0; it < params.inner_max_iters; ++it) {
        if (g.isZero(0.0)) {
            stats.mapping_norm = 0.0;
            stats.converged = true;
            break;
        }
        CVector y;
        CVector d;
        double hy = 0.0;
        bool accepted = false;
        for (int k = 0; k < 200; ++k) {
            y = project(x - t * g);
            d = y - x;
            hy = log_surrogate(lin, y, noise_var, nullptr);
            const double model = h + 2.0 * g.dot(d).real() + d.squaredNorm() / t;
            if (hy <= model) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        stats.mapping_norm = d.norm() / t;
        if (!accepted || d.squaredNorm() == 0.0 || !(hy <= h)) {
            // No representable progress left at this resolution.
            stats.converged = stats.mapping_norm <= params.inner_tol;
            break;
        }
        x = y;
        h = log_surrogate(lin, x, noise_var, &g);
        ++stats.iterations;
        if (stats.mapping_norm <= params.inner_tol) {
            stats.converged = true;
            break;
        }
        t *= 2.0;
    }
    stats.end = surrogate_value(lin, x, noise_var);
    return stats;
}

} // namespace

ObjectiveValue surrogate_value(const PhiLinearization& lin, const CVector& x, double noise_var)
{
    ObjectiveValue out;
    out.n_symbols = lin.n_symbols;
    if (lin.slopes.cols() > 0) {
        out.log_excess = log_surrogate(lin, x, noise_var, nullptr);
    }
    return out;
}

PhiLinearization linearize_phi_precoder(const DesignPoint& anchor, const ChannelSet& channels,
                                        const ConstellationTable& table)
{
    const CMatrix h = assemble_channel(channels, anchor.theta);
    const CMatrix hp = h * anchor.precoder;
    const CMatrix coupling = h.adjoint() * hp;  // H^H H P_n
    const auto n_grams = static_cast<Eigen::Index>(table.grams().size());

    PhiLinearization lin;
    lin.anchor = anchor.precoder.reshaped();
    lin.phi.resize(n_grams);
    lin.slopes.resize(anchor.precoder.size(), n_grams);
    lin.weights = multiplicities(table);
    lin.n_symbols = table.n_symbols();
    for (Eigen::Index g = 0; g < n_grams; ++g) {
        const CVector& e = table.grams()[static_cast<std::size_t>(g)].diff;
        lin.phi(g) = (hp * e).squaredNorm();
        const CMatrix slope = (coupling * e) * e.adjoint();
        lin.slopes.col(g) = slope.reshaped();
    }
    return lin;
}

PhiLinearization linearize_phi_theta(const DesignPoint& anchor, const ChannelSet& channels,
                                     const ConstellationTable& table)
{
    const CMatrix h = assemble_channel(channels, anchor.theta);
    const CMatrix hp = h * anchor.precoder;
    const CMatrix h2_hp = channels.ris_rx.adjoint() * hp;           // N_ris x N_r
    const CMatrix h1_p = channels.scaled_tx_ris() * anchor.precoder; // N_ris x N_r
    const auto n_grams = static_cast<Eigen::Index>(table.grams().size());

    PhiLinearization lin;
    lin.anchor = anchor.theta;
    lin.phi.resize(n_grams);
    lin.slopes.resize(anchor.theta.size(), n_grams);
    lin.weights = multiplicities(table);
    lin.n_symbols = table.n_symbols();
    for (Eigen::Index g = 0; g < n_grams; ++g) {
        const CVector& e = table.grams()[static_cast<std::size_t>(g)].diff;
        lin.phi(g) = (hp * e).squaredNorm();
        lin.slopes.col(g) = (h2_hp * e).cwiseProduct((h1_p * e).conjugate());
    }
    return lin;
}

PrecoderStep solve_subproblem_precoder(const PhiLinearization& lin, Eigen::Index n_tx,
                                       int n_streams, double noise_var, const ScaParams& params)
{
    const double radius_sq = static_cast<double>(n_streams);
    auto project = [radius_sq](const CVector& v) -> CVector {
        const double p = v.squaredNorm();
        return p > radius_sq ? CVector(v * std::sqrt(radius_sq / p)) : v;
    };
    CVector x;
    PrecoderStep out;
    out.stats = minimize_surrogate(lin, noise_var, params, project, x);
    out.precoder = x.reshaped(n_tx, n_streams);
    return out;
}

ThetaStep solve_subproblem_theta(const PhiLinearization& lin, double noise_var,
                                 const ScaParams& params)
{
    auto project = [](const CVector& v) -> CVector {
        CVector out = v;
        for (Eigen::Index l = 0; l < out.size(); ++l) {
            const double r = std::abs(out(l));
            if (r > 1.0) {
                out(l) /= r;
            }
        }
        return out;
    };
    ThetaStep out;
    out.stats = minimize_surrogate(lin, noise_var, params, project, out.theta);
    return out;
}

OptimizerTrace run_sca(const DesignPoint& init, const ChannelSet& channels,
                       const ConstellationTable& table, double noise_var,
                       const ScaParams& params)
{
    params.validate();
    const int nr = static_cast<int>(table.n_streams());
    const Eigen::Index nt = init.precoder.rows();

    // Pull the start into the relaxed feasible set.
    DesignPoint point = init;
    for (Eigen::Index l = 0; l < point.theta.size(); ++l) {
        const double r = std::abs(point.theta(l));
        if (r > 1.0) {
            point.theta(l) /= r;
        }
    }
    if (point.precoder.squaredNorm() > nr) {
        point.precoder = project_precoder(point.precoder, nr);
    }
    ObjectiveValue value = evaluate_objective(point, channels, table, noise_var);

    OptimizerTrace trace;
    IterationRecord first;
    first.iteration = 1;
    first.point = point;
    first.value = value;
    first.mid_value = value;
    first.r0 = value.cutoff_rate();
    first.phase_residual = phase_residual(point.theta);
    first.power_residual = power_residual(point.precoder, nr);
    trace.records.push_back(std::move(first));

    int streak = 0;
    trace.reason = Termination::MaxIterations;
    for (int it = 2; it <= params.outer_max_iters; ++it) {
        IterationRecord rec;
        rec.iteration = it;
        DesignPoint next = point;

        const PrecoderStep ps = solve_subproblem_precoder(
            linearize_phi_precoder(point, channels, table), nt, nr, noise_var, params);
        trace.inner_iterations += static_cast<std::size_t>(ps.stats.iterations);
        next.precoder = ps.precoder;
        ObjectiveValue mid = evaluate_objective(next, channels, table, noise_var);
        if (mid.log_excess > value.log_excess) {
            // Rounding-level violation of the majorization bound; keep P_n.
            next.precoder = point.precoder;
            mid = value;
        }
        rec.precoder_step_norm_sq = (next.precoder - point.precoder).squaredNorm();

        ObjectiveValue after = mid;
        if (params.update_theta) {
            const ThetaStep ts = solve_subproblem_theta(
                linearize_phi_theta(next, channels, table), noise_var, params);
            ++trace.theta_gradient_evals;
            trace.inner_iterations += static_cast<std::size_t>(ts.stats.iterations);
            DesignPoint candidate = next;
            candidate.theta = ts.theta;
            const ObjectiveValue v = evaluate_objective(candidate, channels, table, noise_var);
            if (v.log_excess <= mid.log_excess) {
                rec.theta_step_norm_sq = (candidate.theta - next.theta).squaredNorm();
                next = std::move(candidate);
                after = v;
            }
        }

        if (rec.theta_step_norm_sq == 0.0 && rec.precoder_step_norm_sq == 0.0) {
            trace.reason = Termination::Stationary;
            break;
        }

        const double f_prev = value.f();
        const double drop = value.excess() - after.excess();
        point = std::move(next);
        value = after;

        rec.point = point;
        rec.value = value;
        rec.mid_value = mid;
        rec.r0 = value.cutoff_rate();
        rec.phase_residual = phase_residual(point.theta);
        rec.power_residual = power_residual(point.precoder, nr);
        trace.records.push_back(std::move(rec));

        streak = (drop / f_prev < params.outer_rel_tol) ? streak + 1 : 0;
        if (streak >= params.patience) {
            trace.reason = Termination::RelativeTolerance;
            break;
        }
    }
    trace.final_point = point;
    return trace;
}

BoundaryReport boundary_check(const DesignPoint& point, int n_streams, double tol)
{
    BoundaryReport out;
    out.phase_residual = phase_residual(point.theta);
    out.power_residual = power_residual(point.precoder, n_streams);
    out.pass = out.phase_residual <= tol && out.power_residual <= tol;
    return out;
}

} // namespace riscr
