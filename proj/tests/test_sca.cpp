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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "riscr/rng.hpp"
#include "riscr/sca.hpp"
#include "test_support.hpp"

using namespace riscr;
using namespace riscr::test;

namespace {

struct Instance {
    ChannelSet channels;
    DesignPoint point;
    ConstellationTable table;
    double noise_var;
};

Instance make_instance(std::mt19937_64& rng, int nt, int nr, int nris, int m, bool blocked = false)
{
    ChannelSet c = random_channels(nt, nr, nris, rng, blocked);
    DesignPoint p = random_point(c, rng);
    ConstellationTable t = table_for(m, nr);
    const double s2 = unit_exponent_noise(naive_channel(c, p.theta), p.precoder, t.vectors());
    return {std::move(c), std::move(p), std::move(t), s2};
}

CVector random_in_disk(Eigen::Index n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CVector v = random_phases(n, rng);
    for (Eigen::Index l = 0; l < n; ++l) {
        v(l) *= std::sqrt(u(rng));
    }
    return v;
}

double naive_phi_at(const Instance& in, const CVector& theta, const CMatrix& p, const CVector& e)
{
    const CMatrix h = naive_channel(in.channels, theta);
    double total = 0.0;
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
        cplx y = 0.0;
        for (Eigen::Index t = 0; t < h.cols(); ++t) {
            for (Eigen::Index s = 0; s < p.cols(); ++s) {
                y += h(r, t) * p(t, s) * e(s);
            }
        }
        total += std::norm(y);
    }
    return total;
}

} // namespace

TEST_CASE("precoder linearization is a tangent minorant")
{
    std::mt19937_64 rng(31);
    const Instance in = make_instance(rng, 3, 2, 5, 4);
    const PhiLinearization lin = linearize_phi_precoder(in.point, in.channels, in.table);
    REQUIRE(lin.dim() == 6);
    REQUIRE(static_cast<std::size_t>(lin.phi.size()) == in.table.grams().size());

    const Eigen::VectorXd at_anchor = lin.values(vec(in.point.precoder));
    for (std::size_t g = 0; g < in.table.grams().size(); ++g) {
        const double exact
            = naive_phi_at(in, in.point.theta, in.point.precoder, in.table.grams()[g].diff);
        CHECK(at_anchor(static_cast<Eigen::Index>(g)) == doctest::Approx(exact).epsilon(1e-12));
    }
    for (int k = 0; k < 100; ++k) {
        const CMatrix p = random_matrix(3, 2, rng) * (0.2 + 0.03 * k);
        const Eigen::VectorXd lower = lin.values(vec(p));
        for (std::size_t g = 0; g < in.table.grams().size(); ++g) {
            const double exact = naive_phi_at(in, in.point.theta, p, in.table.grams()[g].diff);
            CHECK(lower(static_cast<Eigen::Index>(g)) <= exact + 1e-9 * (1.0 + exact));
        }
    }
}

TEST_CASE("theta linearization is a tangent minorant")
{
    std::mt19937_64 rng(32);
    const Instance in = make_instance(rng, 3, 2, 5, 4);
    const PhiLinearization lin = linearize_phi_theta(in.point, in.channels, in.table);
    REQUIRE(lin.dim() == 5);
    const Eigen::VectorXd at_anchor = lin.values(in.point.theta);
    for (std::size_t g = 0; g < in.table.grams().size(); ++g) {
        const double exact
            = naive_phi_at(in, in.point.theta, in.point.precoder, in.table.grams()[g].diff);
        CHECK(at_anchor(static_cast<Eigen::Index>(g)) == doctest::Approx(exact).epsilon(1e-12));
    }
    for (int k = 0; k < 100; ++k) {
        const CVector th = random_in_disk(5, rng);
        const Eigen::VectorXd lower = lin.values(th);
        for (std::size_t g = 0; g < in.table.grams().size(); ++g) {
            const double exact = naive_phi_at(in, th, in.point.precoder, in.table.grams()[g].diff);
            CHECK(lower(static_cast<Eigen::Index>(g)) <= exact + 1e-9 * (1.0 + exact));
        }
    }
}

TEST_CASE("single-element theta expansion by hand")
{
    // With one RIS element H P e = u + theta v, so
    // Phi(theta) = |u + theta v|^2 and its conj-Wirtinger slope at theta0 is
    // v^H (u + theta0 v).
    std::mt19937_64 rng(33);
    const Instance in = make_instance(rng, 2, 2, 1, 2);
    const PhiLinearization lin = linearize_phi_theta(in.point, in.channels, in.table);
    for (std::size_t g = 0; g < in.table.grams().size(); ++g) {
        const CVector& e = in.table.grams()[g].diff;
        const CVector u = in.channels.direct * in.point.precoder * e;
        const CVector v = in.channels.ris_rx.col(0) * (in.channels.tx_ris.row(0) * in.point.precoder * e)(0);
        const cplx slope = v.dot(u + in.point.theta(0) * v);
        CHECK(std::abs(lin.slopes(0, static_cast<Eigen::Index>(g)) - slope) < 1e-12 * (1.0 + std::abs(slope)));
        const cplx t(0.3, -0.5);
        const double affine = (u + in.point.theta(0) * v).squaredNorm()
                              + 2.0 * std::real(std::conj(slope) * (t - in.point.theta(0)));
        CHECK(lin.values(CVector::Constant(1, t))(static_cast<Eigen::Index>(g))
              == doctest::Approx(affine).epsilon(1e-12));
    }
}

TEST_CASE("zero difference gives an identically zero affine form")
{
    std::mt19937_64 rng(34);
    const Instance in = make_instance(rng, 3, 2, 4, 2);
    std::vector<DifferenceGram> grams = {{CVector::Zero(2), CMatrix::Zero(2, 2), 1}};
    const ConstellationTable t(in.table.alphabet(), in.table.vectors(), grams);
    const PhiLinearization lp = linearize_phi_precoder(in.point, in.channels, t);
    const PhiLinearization lt = linearize_phi_theta(in.point, in.channels, t);
    CHECK(lp.phi(0) == 0.0);
    CHECK(lp.slopes.norm() == 0.0);
    CHECK(lt.slopes.norm() == 0.0);
    CHECK(lp.values(vec(random_matrix(3, 2, rng)))(0) == 0.0);
}

TEST_CASE("surrogate majorizes f and touches it at the anchor")
{
    std::mt19937_64 rng(35);
    const Instance in = make_instance(rng, 3, 2, 5, 4);
    const double f0 = naive_f(naive_channel(in.channels, in.point.theta), in.point.precoder,
                              in.table.vectors(), in.noise_var);
    const PhiLinearization lp = linearize_phi_precoder(in.point, in.channels, in.table);
    CHECK(surrogate_value(lp, vec(in.point.precoder), in.noise_var).f() == doctest::Approx(f0).epsilon(1e-12));
    const PhiLinearization lt = linearize_phi_theta(in.point, in.channels, in.table);
    CHECK(surrogate_value(lt, in.point.theta, in.noise_var).f() == doctest::Approx(f0).epsilon(1e-12));
    for (int k = 0; k < 50; ++k) {
        const CMatrix p = random_feasible_precoder(3, 2, rng);
        const double f = naive_f(naive_channel(in.channels, in.point.theta), p, in.table.vectors(), in.noise_var);
        CHECK(surrogate_value(lp, vec(p), in.noise_var).f() >= f * (1.0 - 1e-12));
        const CVector th = random_in_disk(5, rng);
        const double ft = naive_f(naive_channel(in.channels, th), in.point.precoder, in.table.vectors(), in.noise_var);
        CHECK(surrogate_value(lt, th, in.noise_var).f() >= ft * (1.0 - 1e-12));
    }
}

TEST_CASE("subproblems")
{
    std::mt19937_64 rng(36);
    const ScaParams params;
    for (int trial = 0; trial < 20; ++trial) {
        const Instance in = make_instance(rng, 3, 2, 6, trial % 2 ? 4 : 2);
        const PhiLinearization lp = linearize_phi_precoder(in.point, in.channels, in.table);
        const PrecoderStep ps = solve_subproblem_precoder(lp, 3, 2, in.noise_var, params);
        CHECK(ps.precoder.squaredNorm() <= 2.0 + 1e-9);
        CHECK(surrogate_value(lp, vec(ps.precoder), in.noise_var).log_excess
              <= surrogate_value(lp, vec(in.point.precoder), in.noise_var).log_excess + 1e-12);
        CHECK(ps.stats.end.log_excess <= ps.stats.start.log_excess);

        const PhiLinearization lt = linearize_phi_theta(in.point, in.channels, in.table);
        const ThetaStep ts = solve_subproblem_theta(lt, in.noise_var, params);
        CHECK(ts.theta.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
        CHECK(surrogate_value(lt, ts.theta, in.noise_var).log_excess
              <= surrogate_value(lt, in.point.theta, in.noise_var).log_excess + 1e-12);
    }

    SUBCASE("stationary anchors are returned unchanged")
    {
        Instance in = make_instance(rng, 3, 2, 4, 4);
        in.channels.direct.setZero();
        in.channels.tx_ris.setZero();
        const PhiLinearization lp = linearize_phi_precoder(in.point, in.channels, in.table);
        const PrecoderStep ps = solve_subproblem_precoder(lp, 3, 2, in.noise_var, params);
        CHECK((ps.precoder - in.point.precoder).norm() == 0.0);
        const PhiLinearization lt = linearize_phi_theta(in.point, in.channels, in.table);
        const ThetaStep ts = solve_subproblem_theta(lt, in.noise_var, params);
        CHECK((ts.theta - in.point.theta).norm() == 0.0);
    }
}

TEST_CASE("SCA runs")
{
    std::mt19937_64 rng(37);
    const ScaParams params;

    SUBCASE("true objective never increases")
    {
        for (int run = 0; run < 25; ++run) {
            const Instance in = make_instance(rng, 3, 2, 4 + run % 4, run % 3 ? 4 : 2, run % 2);
            const OptimizerTrace tr = run_sca(in.point, in.channels, in.table, in.noise_var, params);
            for (std::size_t n = 1; n < tr.records.size(); ++n) {
                CHECK(tr.records[n].value.log_excess <= tr.records[n - 1].value.log_excess);
                CHECK(tr.records[n].mid_value.log_excess <= tr.records[n - 1].value.log_excess);
                CHECK(tr.records[n].point.precoder.squaredNorm() <= 2.0 + 1e-9);
                CHECK(tr.records[n].point.theta.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
            }
        }
    }
    SUBCASE("converged points sit on the boundary")
    {
        ScaParams long_run = params;
        long_run.outer_max_iters = 5000;
        for (int run = 0; run < 10; ++run) {
            const Instance in = make_instance(rng, 3, 2, 4, 4, run % 2);
            const OptimizerTrace tr = run_sca(in.point, in.channels, in.table, in.noise_var, long_run);
            REQUIRE(tr.reason != Termination::MaxIterations);
            const BoundaryReport b = boundary_check(tr.final_point, 2, 1e-2);
            CHECK(b.pass);
        }
    }
    SUBCASE("stationary start stops after the first record")
    {
        Instance in = make_instance(rng, 3, 2, 4, 4);
        in.channels.direct.setZero();
        in.channels.tx_ris.setZero();
        const OptimizerTrace tr = run_sca(in.point, in.channels, in.table, in.noise_var, params);
        CHECK(tr.records.size() == 1);
        CHECK(tr.reason == Termination::Stationary);
        CHECK(tr.final_point.theta == in.point.theta);
        CHECK((tr.final_point.precoder - in.point.precoder).norm() < 1e-14);
    }
    SUBCASE("precoder-only mode")
    {
        const Instance in = make_instance(rng, 3, 2, 4, 4);
        ScaParams p = params;
        p.update_theta = false;
        const OptimizerTrace tr = run_sca(in.point, in.channels, in.table, in.noise_var, p);
        CHECK(tr.theta_gradient_evals == 0);
        CHECK(tr.final_point.theta == in.point.theta);
    }
    SUBCASE("a single outer iteration is only reported")
    {
        const Instance in = make_instance(rng, 3, 2, 4, 4);
        ScaParams p = params;
        p.outer_max_iters = 1;
        const OptimizerTrace tr = run_sca(in.point, in.channels, in.table, in.noise_var, p);
        CHECK(tr.records.size() == 1);
        const BoundaryReport b = boundary_check(tr.final_point, 2, 1e-2);
        CHECK(b.phase_residual == doctest::Approx(phase_residual(tr.final_point.theta)));
        CHECK(b.power_residual == doctest::Approx(power_residual(tr.final_point.precoder, 2)));
    }
}

TEST_CASE("reference scenario")
{
    Rng crng(derive_seed(7, Stream::Channel, {0}));
    const ChannelSet c = realize_channels(SystemGeometry{}, crng, true);
    const auto table = table_for(4, 2);
    Rng irng(derive_seed(7, Stream::Init, {0}));
    const DesignPoint init = random_init(225, 8, 2, irng);
    const OptimizerTrace tr = run_sca(init, c, table, 1e-11, ScaParams{});
    CHECK(tr.records.back().r0 > 2.8);
    CHECK(tr.records.back().r0 < 4.0);
    const BoundaryReport b = boundary_check(tr.final_point, 2, 1e-2);
    CHECK(b.pass);
}

TEST_CASE("boundary report flags interior points")
{
    DesignPoint p{CVector::Constant(3, 0.5), CMatrix::Constant(2, 1, 0.5)};
    const BoundaryReport b = boundary_check(p, 1, 1e-2);
    CHECK_FALSE(b.pass);
    CHECK(b.phase_residual == doctest::Approx(0.5));
    CHECK(b.power_residual == doctest::Approx(0.5));
}

TEST_CASE("parameter validation")
{
    ScaParams p;
    CHECK_NOTHROW(p.validate());
    p.inner_max_iters = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ScaParams{};
    p.outer_max_iters = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
