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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
//
// usage: acceptance <path-to-riscr-cli> [scratch-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "riscr/harness.hpp"
#include "riscr/metrics.hpp"
#include "riscr/pgm.hpp"
#include "riscr/rng.hpp"
#include "riscr/sca.hpp"
#include "test_support.hpp"

using namespace riscr;
using namespace riscr::test;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int g_failures = 0;

void report(int id, const char* name, const Outcome& o)
{
    std::printf("[%s] %2d %-28s %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) {
        ++g_failures;
    }
}

// after <= before - required, on scaled excesses.
bool decreased_enough(const ObjectiveValue& before, const ObjectiveValue& after, double required)
{
    const double lhs = std::exp(after.log_excess - before.log_excess)
                       + required * std::exp(-before.log_excess);
    return lhs <= 1.0 + 1e-12;
}

struct Instance {
    ChannelSet channels;
    DesignPoint point;
    ConstellationTable table;
    double noise_var;
};

Instance small_instance(std::mt19937_64& rng, int nt, int nr, int nris, int m, double noise_scale,
                        bool blocked)
{
    ChannelSet c = random_channels(nt, nr, nris, rng, blocked);
    DesignPoint p = random_point(c, rng);
    ConstellationTable t = table_for(m, nr);
    const double s2
        = unit_exponent_noise(naive_channel(c, p.theta), p.precoder, t.vectors()) * noise_scale;
    return {std::move(c), std::move(p), std::move(t), s2};
}

// 1. Analytic gradients against central differences on 50 small instances.
Outcome gradient_fidelity()
{
    const auto t0 = Clock::now();
    struct Shape {
        int nt, nr, rows, cols;
    };
    const Shape shapes[] = {{4, 2, 2, 4}, {4, 1, 1, 8}, {2, 2, 2, 2}, {3, 2, 1, 5}, {4, 2, 1, 1}};
    double worst_theta = 0.0;
    double worst_p = 0.0;
    int points = 0;
    for (std::size_t s = 0; s < std::size(shapes); ++s) {
        ExperimentConfig c;
        c.geometry.n_tx = shapes[s].nt;
        c.geometry.n_rx = shapes[s].nr;
        c.geometry.ris_rows = shapes[s].rows;
        c.geometry.ris_cols = shapes[s].cols;
        c.modulation_order = 2;
        c.direct_blocked = s % 2 == 1;
        c.seed = 1000 + s;
        c.gradcheck.points = 10;
        const GradCheckReport r = gradcheck(c);
        worst_theta = std::max(worst_theta, r.max_rel_error_theta);
        worst_p = std::max(worst_p, r.max_rel_error_precoder);
        points += r.points;
    }
    const double t = seconds_since(t0);
    return {points == 50 && worst_theta < 1e-5 && worst_p < 1e-5 && t < 10.0,
            fmt("%d instances, max rel. error theta %.2e, P %.2e, %.2f s", points, worst_theta,
                worst_p, t)};
}

// 2. Library objective and cutoff rate against the brute-force double loop.
Outcome oracle_equivalence()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2);
    struct Case {
        int m;
        Modulation kind;
        int nr;
    };
    const Case cases[] = {{2, Modulation::Qam, 1}, {2, Modulation::Qam, 6}, {4, Modulation::Qam, 2},
                          {4, Modulation::Qam, 3}, {8, Modulation::Psk, 2}, {16, Modulation::Qam, 1},
                          {64, Modulation::Qam, 1}, {16, Modulation::Psk, 1}};
    double worst_f = 0.0;
    double worst_r0 = 0.0;
    int n = 0;
    for (int trial = 0; trial < 80; ++trial) {
        const Case& cs = cases[trial % std::size(cases)];
        const ConstellationTable table = table_for(cs.m, cs.nr, cs.kind);
        ChannelSet ch = random_channels(3, cs.nr, 5, rng, trial % 3 == 0);
        ch.direct_gain = 0.5 + trial * 0.01;
        ch.indirect_gain = 2.0 - trial * 0.01;
        const DesignPoint pt = random_point(ch, rng);
        const CMatrix h = naive_channel(ch, pt.theta);
        const double s2 = unit_exponent_noise(h, pt.precoder, table.vectors())
                          * std::pow(10.0, -1.0 + 0.025 * trial);
        const double f_ref = naive_f(h, pt.precoder, table.vectors(), s2);
        const double r0_ref = naive_r0(h, pt.precoder, table.vectors(), s2);
        worst_f = std::max(worst_f, std::abs(objective_f(pt, ch, table, s2) - f_ref) / f_ref);
        worst_r0 = std::max(worst_r0, std::abs(cutoff_rate(pt, ch, table, s2) - r0_ref)
                                          / std::max(std::abs(r0_ref), 1e-300));
        ++n;
    }
    const double t = seconds_since(t0);
    return {worst_f <= 1e-10 && worst_r0 <= 1e-10 && t < 5.0,
            fmt("%d instances, max rel. diff f %.2e, R0 %.2e, %.2f s", n, worst_f, worst_r0, t)};
}

// 3. PGM sufficient decrease at every accepted step; SCA monotone in f.
Outcome descent_invariants()
{
    std::mt19937_64 rng(3);
    const PgmParams pgm;
    const ScaParams sca;
    long pgm_steps = 0;
    long pgm_viol = 0;
    long sca_steps = 0;
    long sca_viol = 0;
    for (int run = 0; run < 100; ++run) {
        const Instance in = small_instance(rng, 2 + run % 3, 1 + run % 2, 2 + run % 7, run % 2 ? 4 : 2,
                                           std::pow(10.0, -0.5 + 0.01 * run), run % 4 == 0);
        const OptimizerTrace tr = run_pgm(in.point, in.channels, in.table, in.noise_var, pgm);
        for (std::size_t k = 1; k < tr.records.size(); ++k) {
            const IterationRecord& a = tr.records[k - 1];
            const IterationRecord& b = tr.records[k];
            pgm_steps += 2;
            pgm_viol += !decreased_enough(a.value, b.mid_value,
                                          pgm.sufficient_decrease * b.theta_step_norm_sq);
            pgm_viol += !decreased_enough(b.mid_value, b.value,
                                          pgm.sufficient_decrease * b.precoder_step_norm_sq);
        }
    }
    for (int run = 0; run < 100; ++run) {
        const Instance in = small_instance(rng, 2 + run % 3, 1 + run % 2, 2 + run % 7, run % 2 ? 4 : 2,
                                           std::pow(10.0, -0.5 + 0.01 * run), run % 4 == 0);
        const OptimizerTrace tr = run_sca(in.point, in.channels, in.table, in.noise_var, sca);
        for (std::size_t k = 1; k < tr.records.size(); ++k) {
            ++sca_steps;
            // Exact comparison in the objective's own split representation.
            sca_viol += tr.records[k].value.log_excess > tr.records[k - 1].value.log_excess;
        }
    }
    return {pgm_viol == 0 && sca_viol == 0,
            fmt("PGM %ld violations in %ld half-steps, SCA %ld in %ld outer steps", pgm_viol,
                pgm_steps, sca_viol, sca_steps)};
}

// 4. Converged SCA points lie on the feasible boundary.
Outcome boundary_property()
{
    std::mt19937_64 rng(4);
    ScaParams sca;
    sca.outer_max_iters = 5000;
    double worst_phase = 0.0;
    double worst_power = 0.0;
    int unconverged = 0;
    for (int run = 0; run < 20; ++run) {
        const Instance in = small_instance(rng, 3 + run % 2, 2, 4 + run % 5, run % 2 ? 4 : 2, 1.0,
                                           run % 3 == 0);
        const OptimizerTrace tr = run_sca(in.point, in.channels, in.table, in.noise_var, sca);
        unconverged += tr.reason == Termination::MaxIterations;
        const BoundaryReport b = boundary_check(tr.final_point, 2, sca.boundary_tol);
        worst_phase = std::max(worst_phase, b.phase_residual);
        worst_power = std::max(worst_power, b.power_residual);
    }
    return {unconverged == 0 && worst_phase <= 1e-2 && worst_power <= 1e-2,
            fmt("20 runs (%d unconverged), max |1-|theta|| %.2e, |N_r-Tr(PP^H)| %.2e", unconverged,
                worst_phase, worst_power)};
}

// 5. Range of R0 and the MI estimate, and the MI lower bound.
Outcome rate_bounds()
{
    std::mt19937_64 rng(5);
    int bad_r0 = 0;
    int bad_mi = 0;
    int bad_lb = 0;
    for (int k = 0; k < 1000; ++k) {
        const int nr = 1 + k % 2;
        const int m = (k / 2) % 2 ? 4 : 2;
        const Instance in = small_instance(rng, 3, nr, 4, m, std::pow(10.0, -2.0 + 0.004 * k), k % 5 == 0);
        const double ns = static_cast<double>(in.table.n_symbols());
        const RateReport r = evaluate_rates(in.point, in.channels, in.table, in.noise_var, 64,
                                            derive_seed(5, {static_cast<std::uint64_t>(k)}));
        const double top = std::log2(ns);
        bad_r0 += !(r.r0 >= 0.0 && r.r0 <= top);
        bad_mi += !(r.mi >= -3.0 * r.mi_stderr && r.mi <= top + 3.0 * r.mi_stderr);
        bad_lb += !(r.mi + 3.0 * r.mi_stderr >= r.mi_lower_bound);
    }
    return {bad_r0 == 0 && bad_mi == 0 && bad_lb == 0,
            fmt("1000 points: R0 out of range %d, MI out of range %d, below lower bound %d", bad_r0,
                bad_mi, bad_lb)};
}

bool within(double v, double lo, double hi)
{
    return v >= lo && v <= hi;
}

// 6. Blocked-direct panel of the rate-trace experiment.
Outcome fig2b(const ExperimentResult& res)
{
    const ArmSummary* pgm = res.find("fig2b", "PGM");
    const ArmSummary* sca = res.find("fig2b", "SCA");
    if (!pgm || !sca) {
        return {false, "missing arms"};
    }
    const double rp = pgm->mean_r0();
    const double rs = sca->mean_r0();
    const double mi = pgm->mean_mi();
    return {pgm->final_r0.size() == 30 && within(rp, 2.87, 3.27) && within(rs, 2.88, 3.28)
                && within(mi, 3.27, 3.67) && std::abs(rp - rs) < 0.1,
            fmt("%zu realizations, R0 PGM %.4f, R0 SCA %.4f, MI PGM %.4f, |diff| %.4f",
                pgm->final_r0.size(), rp, rs, mi, std::abs(rp - rs))};
}

// 7. Blocked-direct panel of the alphabet-size experiment.
Outcome fig3b(const ExperimentResult& res)
{
    const ArmSummary* m4 = res.find("fig3b-M4", "PGM");
    const ArmSummary* m16 = res.find("fig3b-M16", "PGM");
    if (!m4 || !m16) {
        return {false, "missing arms"};
    }
    const bool gauss = m4->mean_gaussian_ref() > m4->mean_mi()
                       && m16->mean_gaussian_ref() > m16->mean_mi();
    return {within(m4->mean_mi(), 3.27, 3.67) && within(m16->mean_mi(), 3.57, 3.97) && gauss,
            fmt("MI M=4 %.4f, M=16 %.4f; Gaussian ref %.4f / %.4f", m4->mean_mi(),
                m16->mean_mi(), m4->mean_gaussian_ref(), m16->mean_gaussian_ref())};
}

// 8. MI above R0 on every arm of the rate-trace experiment.
Outcome mi_exceeds_cr(const ExperimentResult& res)
{
    int bad = 0;
    double worst_gap = 1e300;
    for (const ArmSummary& a : res.arms) {
        const double gap = a.mean_mi() + 3.0 * a.mean_mi_stderr() - a.mean_r0();
        worst_gap = std::min(worst_gap, gap);
        bad += gap < 0.0;
    }
    return {bad == 0 && res.arms.size() == 8,
            fmt("%zu arms, %d violations, min MI + 3 se - R0 %.4f", res.arms.size(), bad, worst_gap)};
}

// 9. Removing the RIS lowers R0 on every matched realization.
Outcome no_ris_degradation(const ExperimentResult& res)
{
    int bad = 0;
    int n = 0;
    double worst = 1e300;
    for (const char* m : {"PGM", "SCA"}) {
        const ArmSummary* with = res.find("fig2a", m);
        const ArmSummary* without = res.find("fig2a", std::string(m) + "-noRIS");
        if (!with || !without) {
            return {false, "missing arms"};
        }
        for (std::size_t r = 0; r < with->final_r0.size(); ++r) {
            const double d = with->final_r0[r] - without->final_r0[r];
            worst = std::min(worst, d);
            bad += !(d > 0.0);
            ++n;
        }
    }
    const ArmSummary* a = res.find("fig2a", "PGM");
    const ArmSummary* b = res.find("fig2a", "PGM-noRIS");
    return {bad == 0 && n > 0,
            fmt("%d matched pairs, %d violations, min gain %.4f; mean R0 PGM %.4f vs %.4f without",
                n, bad, worst, a->mean_r0(), b->mean_r0())};
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// 10. Two CLI runs with the same seed write the same bytes.
Outcome determinism(const std::string& cli, const fs::path& dir, const ExperimentResult& in_process)
{
    const fs::path a = dir / "fig2_run1.csv";
    const fs::path b = dir / "fig2_run2.csv";
    const fs::path c = dir / "fig2_lib.csv";
    for (const fs::path& out : {a, b}) {
        const std::string cmd = "\"" + cli + "\" reproduce-fig2 --seed 7 --out \"" + out.string()
                                + "\" > /dev/null";
        if (std::system(cmd.c_str()) != 0) {
            return {false, "CLI invocation failed: " + cmd};
        }
    }
    emit_csv(in_process.records, c.string());
    const std::string sa = slurp(a);
    const std::string sb = slurp(b);
    const std::string sc = slurp(c);
    return {!sa.empty() && sa == sb && sa == sc,
            fmt("%zu bytes; run1 %s run2, CLI %s library", sa.size(), sa == sb ? "==" : "!=",
                sa == sc ? "==" : "!=")};
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <riscr-cli> [scratch-dir]\n", argv[0]);
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path dir = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "riscr_acceptance";
    fs::create_directories(dir);

    auto guarded = [](const std::function<Outcome()>& fn) {
        try {
            return fn();
        } catch (const std::exception& e) {
            return Outcome{false, std::string("exception: ") + e.what()};
        }
    };

    report(1, "gradient fidelity", guarded(gradient_fidelity));
    report(2, "oracle equivalence", guarded(oracle_equivalence));
    report(3, "descent invariants", guarded(descent_invariants));
    report(4, "boundary property", guarded(boundary_property));
    report(5, "rate bounds", guarded(rate_bounds));

    ExperimentConfig fig_cfg;
    fig_cfg.seed = 7;
    ExperimentResult fig2;
    std::string fig2_error;
    try {
        fig2 = reproduce_fig2(fig_cfg);
    } catch (const std::exception& e) {
        fig2_error = e.what();
    }
    auto with_fig2 = [&](auto fn) {
        return [&, fn] {
            if (!fig2_error.empty()) {
                return Outcome{false, "experiment failed: " + fig2_error};
            }
            return fn(fig2);
        };
    };
    report(6, "rate traces, blocked link", guarded(with_fig2(fig2b)));
    report(7, "alphabet size, blocked link", guarded([&] { return fig3b(reproduce_fig3(fig_cfg)); }));
    report(8, "MI exceeds cutoff rate", guarded(with_fig2(mi_exceeds_cr)));
    report(9, "no-RIS degradation", guarded(with_fig2(no_ris_degradation)));
    report(10, "determinism", guarded([&] { return determinism(cli, dir, fig2); }));

    std::printf("%d of 10 criteria passed\n", 10 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
