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

#include "riscr/pgm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace riscr {

namespace {

// exp(-700) is still a normal double; beyond this shift the true-scale
// gradient weights are no longer trustworthy.
constexpr double kMaxExponentShift = 600.0;

} // namespace

GradientDirection gradient_direction(const DesignPoint& point, const ChannelSet& channels,
                                     const ConstellationTable& table, double noise_var,
                                     bool want_theta, bool want_precoder)
{
    const CMatrix h = assemble_channel(channels, point.theta);
    const CMatrix hp = h * point.precoder;
    const WeightedGram wg = weighted_gram(hp, table, noise_var);

    GradientDirection out;
    out.value = wg.value;
    double scale = 1.0 / (4.0 * noise_var);
    if (-wg.log_scale <= kMaxExponentShift) {
        scale *= std::exp(wg.log_scale);
    } else {
        out.log_scale = wg.log_scale;
    }

    const CMatrix hps = hp * wg.sum;  // H P S, N_r x N_r
    if (want_precoder) {
        out.precoder = -scale * (h.adjoint() * (hps));
    }
    if (want_theta) {
        if (!channels.ris_enabled) {
            out.theta = CVector::Zero(channels.n_ris());
        } else {
            // vec_d(H_2^H (H P S) P^H Hbar_1^H) = rowwise <M1, M2> with
            // M1 = H_2^H H P S and M2 = Hbar_1 P.
            const CMatrix m1 = channels.ris_rx.adjoint() * hps;
            const CMatrix m2 = channels.scaled_tx_ris() * point.precoder;
            out.theta = -scale * (m1.cwiseProduct(m2.conjugate())).rowwise().sum();
        }
    }
    return out;
}

CVector grad_theta(const DesignPoint& point, const ChannelSet& channels,
                   const ConstellationTable& table, double noise_var)
{
    GradientDirection d = gradient_direction(point, channels, table, noise_var, true, false);
    return d.theta * std::exp(d.log_scale);
}

CMatrix grad_precoder(const DesignPoint& point, const ChannelSet& channels,
                      const ConstellationTable& table, double noise_var)
{
    GradientDirection d = gradient_direction(point, channels, table, noise_var, false, true);
    return d.precoder * std::exp(d.log_scale);
}

CVector project_theta(const CVector& theta)
{
    CVector out(theta.size());
    for (Eigen::Index l = 0; l < theta.size(); ++l) {
        const double r = std::abs(theta(l));
        out(l) = r > 0.0 ? theta(l) / r : cplx(1.0, 0.0);
    }
    return out;
}

CMatrix project_precoder(const CMatrix& precoder, int n_streams)
{
    const double power = precoder.squaredNorm();
    if (!(power > 0.0)) {
        throw std::domain_error("project_precoder: projection of the zero matrix is undefined");
    }
    return precoder * std::sqrt(static_cast<double>(n_streams) / power);
}

double phase_residual(const CVector& theta)
{
    double worst = 0.0;
    for (Eigen::Index l = 0; l < theta.size(); ++l) {
        worst = std::max(worst, std::abs(1.0 - std::abs(theta(l))));
    }
    return worst;
}

double power_residual(const CMatrix& precoder, int n_streams)
{
    return std::abs(static_cast<double>(n_streams) - precoder.squaredNorm());
}

void PgmParams::validate() const
{
    if (!(initial_step > 0.0) || !(sufficient_decrease > 0.0) || !(shrink > 0.0 && shrink < 1.0)) {
        throw std::invalid_argument("PGM parameters require L0 > 0, delta > 0, 0 < rho < 1");
    }
    if (max_iters < 1 || max_backtracks < 0 || patience < 1 || !(rel_tol >= 0.0)) {
        throw std::invalid_argument("PGM iteration limits must be positive");
    }
}

bool sufficient_decrease(const ObjectiveValue& before, const ObjectiveValue& after,
                         double required)
{
    if (required <= 0.0) {
        return after.log_excess <= before.log_excess;
    }
    const double log_req = std::log(required);
    if (!(log_req < before.log_excess)) {
        return false;  // the excess cannot drop by more than its own size
    }
    // log(g_before - required), computed without forming g_before.
    const double bound = before.log_excess + std::log1p(-std::exp(log_req - before.log_excess));
    return after.log_excess <= bound;
}

namespace {

template <class Candidate>
LineSearchResult backtrack(const DesignPoint& current, const ObjectiveValue& value,
                           const ChannelSet& channels, const ConstellationTable& table,
                           double noise_var, const PgmParams& params, Candidate&& candidate,
                           bool direction_is_zero)
{
    LineSearchResult out;
    out.point = current;
    out.value = value;
    out.step = params.initial_step;
    if (direction_is_zero) {
        return out;
    }
    double mu = params.initial_step;
    for (int k = 0; k < params.max_backtracks; ++k, mu *= params.shrink) {
        DesignPoint trial = current;
        double dist_sq = 0.0;
        if (!candidate(mu, trial, dist_sq)) {
            continue;
        }
        const ObjectiveValue v = evaluate_objective(trial, channels, table, noise_var);
        if (sufficient_decrease(value, v, params.sufficient_decrease * dist_sq)) {
            out.point = std::move(trial);
            out.value = v;
            out.step = mu;
            out.backtracks = k;
            out.step_norm_sq = dist_sq;
            return out;
        }
    }
    out.backtracks = params.max_backtracks;
    out.step = mu;
    out.stalled = true;
    return out;
}

} // namespace

LineSearchResult line_search_theta(const DesignPoint& current, const ObjectiveValue& value,
                                   const ChannelSet& channels, const ConstellationTable& table,
                                   double noise_var, const PgmParams& params)
{
    const GradientDirection g
        = gradient_direction(current, channels, table, noise_var, true, false);
    const CVector& dir = g.theta;
    auto candidate = [&](double mu, DesignPoint& trial, double& dist_sq) {
        trial.theta = project_theta(current.theta - mu * dir);
        dist_sq = (trial.theta - current.theta).squaredNorm();
        return true;
    };
    return backtrack(current, value, channels, table, noise_var, params, candidate,
                     dir.isZero(0.0));
}

LineSearchResult line_search_precoder(const DesignPoint& current, const ObjectiveValue& value,
                                      const ChannelSet& channels,
                                      const ConstellationTable& table, double noise_var,
                                      const PgmParams& params)
{
    const GradientDirection g
        = gradient_direction(current, channels, table, noise_var, false, true);
    const int nr = static_cast<int>(current.precoder.cols());
    auto candidate = [&](double mu, DesignPoint& trial, double& dist_sq) {
        const CMatrix moved = current.precoder - mu * g.precoder;
        if (!(moved.squaredNorm() > 0.0)) {
            return false;
        }
        trial.precoder = project_precoder(moved, nr);
        dist_sq = (trial.precoder - current.precoder).squaredNorm();
        return true;
    };
    return backtrack(current, value, channels, table, noise_var, params, candidate,
                     g.precoder.isZero(0.0));
}

std::string_view to_string(Termination t)
{
    switch (t) {
    case Termination::RelativeTolerance: return "rel_tol";
    case Termination::MaxIterations: return "max_iters";
    case Termination::Stalled: return "stalled";
    case Termination::Stationary: return "stationary";
    }
    return "unknown";
}

DesignPoint random_init(int n_ris, int n_tx, int n_streams, Rng& rng)
{
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    DesignPoint p;
    p.theta.resize(n_ris);
    for (int l = 0; l < n_ris; ++l) {
        p.theta(l) = std::polar(1.0, phase(rng));
    }
    p.precoder.resize(n_tx, n_streams);
    for (int c = 0; c < n_streams; ++c) {
        for (int r = 0; r < n_tx; ++r) {
            p.precoder(r, c) = complex_normal(rng);
        }
    }
    p.precoder = project_precoder(p.precoder, n_streams);
    return p;
}

OptimizerTrace run_pgm(const DesignPoint& init, const ChannelSet& channels,
                       const ConstellationTable& table, double noise_var,
                       const PgmParams& params)
{
    params.validate();
    const int nr = static_cast<int>(table.n_streams());

    DesignPoint point{project_theta(init.theta), project_precoder(init.precoder, nr)};
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
    for (int it = 2; it <= params.max_iters; ++it) {
        IterationRecord rec;
        rec.iteration = it;

        DesignPoint next = point;
        ObjectiveValue mid = value;
        if (params.update_theta) {
            const LineSearchResult ls
                = line_search_theta(point, value, channels, table, noise_var, params);
            ++trace.theta_gradient_evals;
            next = ls.point;
            mid = ls.value;
            rec.step_theta = ls.step;
            rec.backtracks_theta = ls.backtracks;
            rec.stall_theta = ls.stalled;
            rec.theta_step_norm_sq = ls.step_norm_sq;
        }
        const LineSearchResult lp
            = line_search_precoder(next, mid, channels, table, noise_var, params);
        rec.step_precoder = lp.step;
        rec.backtracks_precoder = lp.backtracks;
        rec.stall_precoder = lp.stalled;
        rec.precoder_step_norm_sq = lp.step_norm_sq;

        const bool moved = rec.theta_step_norm_sq > 0.0 || rec.precoder_step_norm_sq > 0.0;
        if (!moved) {
            const bool theta_stuck = rec.stall_theta || !params.update_theta;
            trace.reason = (theta_stuck && lp.stalled) ? Termination::Stalled
                                                       : Termination::Stationary;
            break;
        }

        const double f_prev = value.f();
        const double drop = value.excess() - lp.value.excess();
        point = lp.point;
        value = lp.value;

        rec.point = point;
        rec.value = value;
        rec.mid_value = mid;
        rec.r0 = value.cutoff_rate();
        rec.phase_residual = phase_residual(point.theta);
        rec.power_residual = power_residual(point.precoder, nr);
        trace.records.push_back(std::move(rec));

        streak = (drop / f_prev < params.rel_tol) ? streak + 1 : 0;
        if (streak >= params.patience) {
            trace.reason = Termination::RelativeTolerance;
            break;
        }
    }
    trace.final_point = point;
    return trace;
}

} // namespace riscr
