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

#include "riscr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "riscr/rng.hpp"

namespace riscr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Phi_g / (4 sigma^2) for every distinct gram, using A = (HP)^H (HP).
std::vector<double> exponents(const CMatrix& hp, const ConstellationTable& table,
                              double noise_var)
{
    const CMatrix a = hp.adjoint() * hp;
    const double inv = 1.0 / (4.0 * noise_var);
    std::vector<double> out;
    out.reserve(table.grams().size());
    for (const auto& g : table.grams()) {
        const double v = (g.diff.adjoint() * a * g.diff)(0, 0).real();
        out.push_back(std::max(v, 0.0) * inv);
    }
    return out;
}

void require_noise(double noise_var)
{
    if (!(noise_var > 0.0)) {
        throw std::invalid_argument("noise variance must be positive");
    }
}

CMatrix effective(const DesignPoint& point, const ChannelSet& channels)
{
    return assemble_channel(channels, point.theta) * point.precoder;
}

} // namespace

double ObjectiveValue::excess() const
{
    return std::exp(log_excess);
}

double ObjectiveValue::f() const
{
    return static_cast<double>(n_symbols) + excess();
}

double ObjectiveValue::log_f() const
{
    const double ln_ns = std::log(static_cast<double>(n_symbols));
    return ln_ns + std::log1p(std::exp(log_excess - ln_ns));
}

double ObjectiveValue::cutoff_rate() const
{
    const double ln_ns = std::log(static_cast<double>(n_symbols));
    return (ln_ns - std::log1p(std::exp(log_excess - ln_ns))) / std::numbers::ln2;
}

double phi(const CMatrix& h, const CMatrix& precoder, const CVector& diff)
{
    return (h * (precoder * diff)).squaredNorm();
}

ObjectiveValue evaluate_objective(const CMatrix& hp, const ConstellationTable& table,
                                  double noise_var)
{
    require_noise(noise_var);
    ObjectiveValue out;
    out.n_symbols = table.n_symbols();
    const auto a = exponents(hp, table, noise_var);
    if (a.empty()) {
        return out;
    }
    const double lo = *std::min_element(a.begin(), a.end());
    double s = 0.0;
    for (std::size_t g = 0; g < a.size(); ++g) {
        s += static_cast<double>(table.grams()[g].multiplicity) * std::exp(lo - a[g]);
    }
    out.log_excess = -lo + std::log(s);
    return out;
}

ObjectiveValue evaluate_objective(const DesignPoint& point, const ChannelSet& channels,
                                  const ConstellationTable& table, double noise_var)
{
    return evaluate_objective(effective(point, channels), table, noise_var);
}

double objective_f(const DesignPoint& point, const ChannelSet& channels,
                   const ConstellationTable& table, double noise_var)
{
    return evaluate_objective(point, channels, table, noise_var).f();
}

double objective_logf(const DesignPoint& point, const ChannelSet& channels,
                      const ConstellationTable& table, double noise_var)
{
    return evaluate_objective(point, channels, table, noise_var).log_f();
}

double cutoff_rate(const DesignPoint& point, const ChannelSet& channels,
                   const ConstellationTable& table, double noise_var)
{
    return evaluate_objective(point, channels, table, noise_var).cutoff_rate();
}

double cutoff_rate_half_noise(const DesignPoint& point, const ChannelSet& channels,
                              const ConstellationTable& table, double noise_var)
{
    return cutoff_rate(point, channels, table, 0.5 * noise_var);
}

double mi_lower_bound(double r0_half, int n_streams)
{
    return n_streams * (1.0 - std::numbers::log2e) + r0_half;
}

WeightedGram weighted_gram(const CMatrix& hp, const ConstellationTable& table, double noise_var)
{
    require_noise(noise_var);
    const auto nr = static_cast<Eigen::Index>(table.n_streams());
    WeightedGram out;
    out.sum = CMatrix::Zero(nr, nr);
    out.value.n_symbols = table.n_symbols();
    const auto a = exponents(hp, table, noise_var);
    if (a.empty()) {
        return out;
    }
    const double lo = *std::min_element(a.begin(), a.end());
    double s = 0.0;
    for (std::size_t g = 0; g < a.size(); ++g) {
        const auto& gram = table.grams()[g];
        const double w = static_cast<double>(gram.multiplicity) * std::exp(lo - a[g]);
        s += w;
        out.sum.noalias() += w * gram.gram;
    }
    out.log_scale = -lo;
    out.value.log_excess = -lo + std::log(s);
    return out;
}

MiEstimate mutual_information_mc(const CMatrix& hp, const ConstellationTable& table,
                                 double noise_var, std::size_t draws_per_symbol,
                                 std::uint64_t seed)
{
    require_noise(noise_var);
    if (draws_per_symbol < 1) {
        throw std::invalid_argument("at least one noise draw per symbol is required");
    }
    const std::size_t ns = table.n_symbols();
    const Eigen::Index nr = hp.rows();
    const CMatrix rx = hp * table.vectors();  // noiseless receive points
    const double sigma = std::sqrt(noise_var);

    std::vector<double> psi(ns);
    CVector n(nr);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
        const auto xi = rx.col(static_cast<Eigen::Index>(i));
        for (std::size_t draw = 0; draw < draws_per_symbol; ++draw) {
            for (Eigen::Index r = 0; r < nr; ++r) {
                n(r) = sigma * complex_normal(rng);
            }
            const double nn = n.squaredNorm();
            double hi = -kInf;
            for (std::size_t j = 0; j < ns; ++j) {
                const double d = (xi - rx.col(static_cast<Eigen::Index>(j)) + n).squaredNorm();
                psi[j] = (nn - d) / noise_var;
                hi = std::max(hi, psi[j]);
            }
            double acc = 0.0;
            for (double p : psi) {
                acc += std::exp(p - hi);
            }
            const double v = (hi + std::log(acc)) / std::numbers::ln2;
            sum += v;
            sum_sq += v * v;
        }
    }
    const double count = static_cast<double>(ns * draws_per_symbol);
    const double mean = sum / count;
    const double var = count > 1.0 ? std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0))
                                   : 0.0;
    MiEstimate out;
    out.value = std::log2(static_cast<double>(ns)) - mean;
    out.std_error = std::sqrt(var / count);
    out.samples = ns * draws_per_symbol;
    return out;
}

MiEstimate mutual_information_mc(const DesignPoint& point, const ChannelSet& channels,
                                 const ConstellationTable& table, double noise_var,
                                 std::size_t draws_per_symbol, std::uint64_t seed)
{
    return mutual_information_mc(effective(point, channels), table, noise_var, draws_per_symbol,
                                 seed);
}

double gaussian_rate(const CMatrix& h, const CMatrix& precoder, double noise_var)
{
    require_noise(noise_var);
    const CMatrix hp = h * precoder;
    const CMatrix m = CMatrix::Identity(h.rows(), h.rows()) + hp * hp.adjoint() / noise_var;
    const Eigen::LLT<CMatrix> llt(m);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("gaussian_rate: covariance factorization failed");
    }
    double logdet = 0.0;
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        logdet += 2.0 * std::log(llt.matrixL()(k, k).real());
    }
    return logdet / std::numbers::ln2;
}

double gaussian_rate(const DesignPoint& point, const ChannelSet& channels, double noise_var)
{
    return gaussian_rate(assemble_channel(channels, point.theta), point.precoder, noise_var);
}

double water_filling_rate(const CMatrix& h, double power, double noise_var)
{
    require_noise(noise_var);
    if (!(power >= 0.0)) {
        throw std::invalid_argument("water_filling_rate: power must be non-negative");
    }
    const Eigen::SelfAdjointEigenSolver<CMatrix> eig(h * h.adjoint());
    std::vector<double> gains;
    for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
        const double g = eig.eigenvalues()(k) / noise_var;
        if (g > 0.0) {
            gains.push_back(g);
        }
    }
    std::sort(gains.begin(), gains.end(), std::greater<>());
    // Largest active set whose water level clears every inverse gain.
    double level = 0.0;
    std::size_t active = 0;
    double inv_sum = 0.0;
    for (std::size_t m = 1; m <= gains.size(); ++m) {
        inv_sum += 1.0 / gains[m - 1];
        const double mu = (power + inv_sum) / static_cast<double>(m);
        if (mu > 1.0 / gains[m - 1]) {
            level = mu;
            active = m;
        } else {
            break;
        }
    }
    double rate = 0.0;
    for (std::size_t k = 0; k < active; ++k) {
        rate += std::log2(level * gains[k]);
    }
    return rate;
}

RateReport evaluate_rates(const DesignPoint& point, const ChannelSet& channels,
                          const ConstellationTable& table, double noise_var,
                          std::size_t draws_per_symbol, std::uint64_t seed)
{
    const CMatrix h = assemble_channel(channels, point.theta);
    const CMatrix hp = h * point.precoder;
    const ObjectiveValue v = evaluate_objective(hp, table, noise_var);
    const ObjectiveValue half = evaluate_objective(hp, table, 0.5 * noise_var);
    const MiEstimate mi = mutual_information_mc(hp, table, noise_var, draws_per_symbol, seed);

    RateReport out;
    out.r0 = v.cutoff_rate();
    out.f_log = v.log_f();
    out.mi = mi.value;
    out.mi_stderr = mi.std_error;
    out.mi_lower_bound = mi_lower_bound(half.cutoff_rate(), static_cast<int>(table.n_streams()));
    out.gaussian_rate = gaussian_rate(h, point.precoder, noise_var);
    out.gaussian_ref = water_filling_rate(h, static_cast<double>(table.n_streams()), noise_var);
    return out;
}

} // namespace riscr
