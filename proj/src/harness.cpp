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

#include "riscr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "riscr/metrics.hpp"
#include "riscr/pgm.hpp"
#include "riscr/sca.hpp"

namespace riscr {

namespace {

struct Arm {
    Method method;  // Pgm or Sca
    bool ris_enabled;

    std::string label() const
    {
        std::string s = method == Method::Pgm ? "PGM" : "SCA";
        return ris_enabled ? s : s + "-noRIS";
    }
};

std::vector<Arm> arms_for(Method method, bool ris_enabled)
{
    std::vector<Arm> out;
    if (method != Method::Sca) {
        out.push_back({Method::Pgm, ris_enabled});
    }
    if (method != Method::Pgm) {
        out.push_back({Method::Sca, ris_enabled});
    }
    return out;
}

struct ArmRun {
    std::vector<RunRecord> rows;
    RunRecord final_row;
    std::size_t theta_gradient_evals = 0;
    double phase_residual = 0.0;
    double power_residual = 0.0;
    std::string termination;
};

std::size_t per_symbol(std::size_t total, std::size_t n_symbols)
{
    return std::max<std::size_t>(1, (total + n_symbols - 1) / n_symbols);
}

ArmRun run_arm(const ExperimentConfig& cfg, const std::string& run_id, const Arm& arm,
               const ChannelSet& base, const DesignPoint& init, const ConstellationTable& table,
               int realization)
{
    const double noise_var = cfg.noise_variance();
    ChannelSet channels = base;
    channels.ris_enabled = arm.ris_enabled;

    const auto t0 = std::chrono::steady_clock::now();
    OptimizerTrace trace;
    if (arm.method == Method::Pgm) {
        PgmParams p = cfg.pgm;
        p.update_theta = arm.ris_enabled;
        trace = run_pgm(init, channels, table, noise_var, p);
    } else {
        ScaParams p = cfg.sca;
        p.update_theta = arm.ris_enabled;
        trace = run_sca(init, channels, table, noise_var, p);
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ArmRun out;
    const std::size_t draws = per_symbol(cfg.mi_draws, table.n_symbols());
    const auto r = static_cast<std::uint64_t>(realization);
    for (const auto& rec : trace.records) {
        RunRecord row;
        row.run_id = run_id;
        row.method = arm.label();
        row.kind = RecordKind::Iteration;
        row.realization = realization;
        row.iteration = rec.iteration;
        row.report = evaluate_rates(
            rec.point, channels, table, noise_var, draws,
            derive_seed(cfg.seed, Stream::Noise, {r, static_cast<std::uint64_t>(rec.iteration)}));
        row.wall_time = wall;
        out.rows.push_back(std::move(row));
    }

    out.final_row.run_id = run_id;
    out.final_row.method = arm.label();
    out.final_row.kind = RecordKind::Final;
    out.final_row.realization = realization;
    out.final_row.iteration = trace.records.back().iteration;
    out.final_row.report = evaluate_rates(trace.final_point, channels, table, noise_var,
                                          per_symbol(cfg.mi_final_draws, table.n_symbols()),
                                          derive_seed(cfg.seed, Stream::NoiseFinal, {r}));
    out.final_row.wall_time = wall;
    out.theta_gradient_evals = trace.theta_gradient_evals;
    out.phase_residual = phase_residual(trace.final_point.theta);
    out.power_residual = power_residual(trace.final_point.precoder,
                                        static_cast<int>(table.n_streams()));
    out.termination = std::string(to_string(trace.reason));
    return out;
}

template <class Fn>
void parallel_for(int n, int threads, Fn&& fn)
{
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int t = 0; t < std::min(threads, n); ++t) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

RateReport average(const std::vector<const RateReport*>& reports)
{
    RateReport m;
    const double n = static_cast<double>(reports.size());
    for (const RateReport* r : reports) {
        m.r0 += r->r0 / n;
        m.mi += r->mi / n;
        m.mi_stderr += r->mi_stderr / n;
        m.mi_lower_bound += r->mi_lower_bound / n;
        m.gaussian_rate += r->gaussian_rate / n;
        m.gaussian_ref += r->gaussian_ref / n;
        m.f_log += r->f_log / n;
    }
    return m;
}

// Runs every arm on every realization of one scenario and appends rows and
// summaries to `out`.
void run_panel(const ExperimentConfig& cfg, const std::string& run_id,
               const std::vector<Arm>& arms, ExperimentResult& out)
{
    cfg.validate();
    const auto alphabet = build_alphabet(cfg.modulation_order, cfg.modulation);
    const ConstellationTable table
        = enumerate_vectors(alphabet, cfg.geometry.n_rx, cfg.max_symbols);

    const int n = cfg.n_realizations;
    std::vector<std::vector<ArmRun>> runs(static_cast<std::size_t>(n));
    parallel_for(n, cfg.threads, [&](int r) {
        const auto ur = static_cast<std::uint64_t>(r);
        Rng channel_rng(derive_seed(cfg.seed, Stream::Channel, {ur}));
        const ChannelSet channels = realize_channels(cfg.geometry, channel_rng, cfg.direct_blocked);
        Rng init_rng(derive_seed(cfg.seed, Stream::Init, {ur}));
        const DesignPoint init = random_init(cfg.geometry.n_ris(), cfg.geometry.n_tx,
                                             cfg.geometry.n_rx, init_rng);
        auto& slot = runs[static_cast<std::size_t>(r)];
        for (const Arm& arm : arms) {
            slot.push_back(run_arm(cfg, run_id, arm, channels, init, table, r));
        }
    });

    for (std::size_t a = 0; a < arms.size(); ++a) {
        ArmSummary s;
        s.run_id = run_id;
        s.method = arms[a].label();
        s.ris_enabled = arms[a].ris_enabled;
        std::size_t longest = 0;
        for (int r = 0; r < n; ++r) {
            const ArmRun& run = runs[static_cast<std::size_t>(r)][a];
            out.records.insert(out.records.end(), run.rows.begin(), run.rows.end());
            longest = std::max(longest, run.rows.size());
        }
        // Shorter runs hold their converged value.
        for (std::size_t k = 0; k < longest; ++k) {
            std::vector<const RateReport*> col;
            for (int r = 0; r < n; ++r) {
                const auto& rows = runs[static_cast<std::size_t>(r)][a].rows;
                col.push_back(&rows[std::min(k, rows.size() - 1)].report);
            }
            RunRecord m;
            m.run_id = run_id;
            m.method = s.method;
            m.kind = RecordKind::Mean;
            m.realization = -1;
            m.iteration = static_cast<int>(k + 1);
            m.report = average(col);
            out.records.push_back(std::move(m));
        }
        std::vector<const RateReport*> finals;
        for (int r = 0; r < n; ++r) {
            const ArmRun& run = runs[static_cast<std::size_t>(r)][a];
            out.records.push_back(run.final_row);
            finals.push_back(&run.final_row.report);
            const RateReport& f = run.final_row.report;
            s.final_r0.push_back(f.r0);
            s.final_mi.push_back(f.mi);
            s.final_mi_stderr.push_back(f.mi_stderr);
            s.final_mi_lower_bound.push_back(f.mi_lower_bound);
            s.final_gaussian_rate.push_back(f.gaussian_rate);
            s.final_gaussian_ref.push_back(f.gaussian_ref);
            s.iterations.push_back(run.final_row.iteration);
            s.termination.push_back(run.termination);
            s.wall_time.push_back(run.final_row.wall_time);
            s.theta_gradient_evals += run.theta_gradient_evals;
            s.max_phase_residual = std::max(s.max_phase_residual, run.phase_residual);
            s.max_power_residual = std::max(s.max_power_residual, run.power_residual);
        }
        RunRecord fm;
        fm.run_id = run_id;
        fm.method = s.method;
        fm.kind = RecordKind::FinalMean;
        fm.realization = -1;
        fm.iteration = static_cast<int>(longest);
        fm.report = average(finals);
        out.records.push_back(std::move(fm));
        out.arms.push_back(std::move(s));
    }
}

double relative_error(const CVector& analytic, const CVector& numeric)
{
    const double scale = std::max(analytic.norm(), numeric.norm());
    return scale > 0.0 ? (analytic - numeric).norm() / scale : 0.0;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

} // namespace

double mean(const std::vector<double>& v)
{
    if (v.empty()) {
        return 0.0;
    }
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

double ArmSummary::mean_r0() const { return mean(final_r0); }
double ArmSummary::mean_mi() const { return mean(final_mi); }
double ArmSummary::mean_mi_stderr() const { return mean(final_mi_stderr); }
double ArmSummary::mean_gaussian_rate() const { return mean(final_gaussian_rate); }
double ArmSummary::mean_gaussian_ref() const { return mean(final_gaussian_ref); }

double ArmSummary::mean_iterations() const
{
    std::vector<double> it(iterations.begin(), iterations.end());
    return mean(it);
}

const ArmSummary* ExperimentResult::find(const std::string& run_id,
                                         const std::string& method) const
{
    for (const auto& a : arms) {
        if (a.run_id == run_id && a.method == method) {
            return &a;
        }
    }
    return nullptr;
}

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    ExperimentResult out;
    run_panel(config, config.run_id, arms_for(config.method, config.ris_enabled), out);
    return out;
}

ExperimentResult run_no_ris_baseline(const ExperimentConfig& config)
{
    ExperimentResult out;
    run_panel(config, config.run_id, arms_for(config.method, false), out);
    return out;
}

ExperimentResult run_sweep(const ExperimentConfig& config)
{
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    for (const auto& axis : split(config.sweep_grid, ';')) {
        const auto eq = axis.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("sweep axis '" + axis + "' must look like key=v1,v2");
        }
        auto values = split(axis.substr(eq + 1), ',');
        if (values.empty()) {
            throw ConfigError("sweep axis '" + axis + "' has no values");
        }
        axes.emplace_back(axis.substr(0, eq), std::move(values));
    }
    if (axes.empty()) {
        throw ConfigError("sweep.grid is empty");
    }

    ExperimentResult out;
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
        ExperimentConfig cfg = config;
        std::string id;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const std::string& v = axes[a].second[idx[a]];
            apply_setting(cfg, axes[a].first, v);
            id += (a ? "," : "") + axes[a].first + "=" + v;
        }
        // Commas would break the CSV row; use '&' between axes in run_id.
        std::replace(id.begin(), id.end(), ',', '&');
        cfg.run_id = id;
        ExperimentResult part = run_experiment(cfg);
        out.records.insert(out.records.end(), part.records.begin(), part.records.end());
        out.arms.insert(out.arms.end(), part.arms.begin(), part.arms.end());

        std::size_t a = axes.size();
        while (a > 0) {
            --a;
            if (++idx[a] < axes[a].second.size()) {
                break;
            }
            idx[a] = 0;
            if (a == 0) {
                return out;
            }
        }
    }
}

GradCheckReport gradcheck(const ExperimentConfig& config)
{
    config.validate();
    const auto alphabet = build_alphabet(config.modulation_order, config.modulation);
    const ConstellationTable table = enumerate_vectors(alphabet, config.geometry.n_rx, 64);
    if (config.geometry.n_ris() > 16) {
        throw ConfigError("gradcheck is limited to N_ris <= 16");
    }

    GradCheckReport rep;
    rep.points = config.gradcheck.points;
    rep.threshold = config.gradcheck.threshold;
    const double h = config.gradcheck.step;
    for (int p = 0; p < config.gradcheck.points; ++p) {
        Rng rng(derive_seed(config.seed, Stream::GradCheck, {static_cast<std::uint64_t>(p)}));
        ChannelSet channels = realize_channels(config.geometry, rng, config.direct_blocked);
        channels.ris_enabled = config.ris_enabled;
        const DesignPoint x = random_init(config.geometry.n_ris(), config.geometry.n_tx,
                                          config.geometry.n_rx, rng);
        double noise_var = config.noise_variance();
        if (config.gradcheck.auto_noise) {
            const CMatrix hp = assemble_channel(channels, x.theta) * x.precoder;
            double total = 0.0;
            double count = 0.0;
            for (const auto& g : table.grams()) {
                total += static_cast<double>(g.multiplicity) * (hp * g.diff).squaredNorm();
                count += static_cast<double>(g.multiplicity);
            }
            noise_var = total > 0.0 ? total / (4.0 * count) : 1.0;
        }
        // Differences of f taken on the off-diagonal excess: f(x+) - f(x-)
        // equals excess(x+) - excess(x-) without the N_s offset cancelling.
        auto excess = [&](const DesignPoint& y) {
            return evaluate_objective(y, channels, table, noise_var).excess();
        };

        const CVector gt = grad_theta(x, channels, table, noise_var);
        CVector nt(gt.size());
        for (Eigen::Index l = 0; l < gt.size(); ++l) {
            DesignPoint a = x, b = x;
            a.theta(l) += h;
            b.theta(l) -= h;
            const double d_re = (excess(a) - excess(b)) / (2 * h);
            a = x;
            b = x;
            a.theta(l) += cplx(0, h);
            b.theta(l) -= cplx(0, h);
            const double d_im = (excess(a) - excess(b)) / (2 * h);
            nt(l) = 0.5 * cplx(d_re, d_im);
        }
        const CMatrix gp = grad_precoder(x, channels, table, noise_var);
        CMatrix np(gp.rows(), gp.cols());
        for (Eigen::Index c = 0; c < gp.cols(); ++c) {
            for (Eigen::Index r = 0; r < gp.rows(); ++r) {
                DesignPoint a = x, b = x;
                a.precoder(r, c) += h;
                b.precoder(r, c) -= h;
                const double d_re = (excess(a) - excess(b)) / (2 * h);
                a = x;
                b = x;
                a.precoder(r, c) += cplx(0, h);
                b.precoder(r, c) -= cplx(0, h);
                const double d_im = (excess(a) - excess(b)) / (2 * h);
                np(r, c) = 0.5 * cplx(d_re, d_im);
            }
        }
        rep.max_rel_error_theta = std::max(rep.max_rel_error_theta, relative_error(gt, nt));
        rep.max_rel_error_precoder
            = std::max(rep.max_rel_error_precoder, relative_error(gp.reshaped(), np.reshaped()));
    }
    rep.pass = rep.max_rel_error_theta < rep.threshold && rep.max_rel_error_precoder < rep.threshold;
    return rep;
}

ExperimentResult reproduce_fig2(const ExperimentConfig& config)
{
    ExperimentResult out;
    std::vector<Arm> arms = {{Method::Pgm, true}, {Method::Sca, true}, {Method::Pgm, false},
                             {Method::Sca, false}};
    for (const bool blocked : {false, true}) {
        ExperimentConfig cfg = config;
        cfg.direct_blocked = blocked;
        run_panel(cfg, blocked ? "fig2b" : "fig2a", arms, out);
    }
    return out;
}

ExperimentResult reproduce_fig3(const ExperimentConfig& config)
{
    ExperimentResult out;
    for (const bool blocked : {false, true}) {
        for (const int order : {4, 16}) {
            ExperimentConfig cfg = config;
            cfg.direct_blocked = blocked;
            cfg.modulation = Modulation::Qam;
            cfg.modulation_order = order;
            run_panel(cfg, std::string(blocked ? "fig3b" : "fig3a") + "-M" + std::to_string(order),
                      {{Method::Pgm, true}}, out);
        }
    }
    return out;
}

std::string format_summary(const ExperimentResult& result)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    char line[256];
    if (result.gradcheck) {
        const auto& g = *result.gradcheck;
        std::snprintf(line, sizeof line,
                      "gradcheck: %d points, max rel. error theta %.3e, P %.3e (threshold %.1e) "
                      "-> %s\n",
                      g.points, g.max_rel_error_theta, g.max_rel_error_precoder, g.threshold,
                      g.pass ? "PASS" : "FAIL");
        os << line;
    }
    if (!result.arms.empty()) {
        std::snprintf(line, sizeof line, "%-28s %-10s %4s %8s %8s %8s %8s %8s %7s %8s\n",
                      "run_id", "method", "n", "R0", "MI", "MI_se", "Gauss", "GaussWF", "iters",
                      "time[s]");
        os << line;
    }
    for (const auto& a : result.arms) {
        std::snprintf(line, sizeof line,
                      "%-28s %-10s %4zu %8.4f %8.4f %8.4f %8.4f %8.4f %7.1f %8.3f\n",
                      a.run_id.c_str(), a.method.c_str(), a.final_r0.size(), a.mean_r0(),
                      a.mean_mi(), a.mean_mi_stderr(), a.mean_gaussian_rate(),
                      a.mean_gaussian_ref(), a.mean_iterations(), mean(a.wall_time));
        os << line;
    }
    return os.str();
}

} // namespace riscr
