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

#include "riscr/channel_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace riscr {

namespace {

constexpr double kPureLosK = 1e12;

void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
}

// ULA centered on `mid`, laid out along the y axis.
std::vector<Point3> linear_array(const Point3& mid, int n, double spacing)
{
    std::vector<Point3> out(static_cast<std::size_t>(n));
    const double c = 0.5 * (n - 1);
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = {mid.x, mid.y + (k - c) * spacing, mid.z};
    }
    return out;
}

} // namespace

void SystemGeometry::validate() const
{
    require_positive(wavelength, "wavelength");
    require_positive(wall_separation, "wall_separation");
    require_positive(tx_offset, "tx_offset");
    require_positive(rx_offset, "rx_offset");
    require_positive(ris_offset, "ris_offset");
    require_positive(tx_spacing, "tx_spacing");
    require_positive(rx_spacing, "rx_spacing");
    require_positive(ris_spacing, "ris_spacing");
    if (n_rx < 1 || n_tx < n_rx) {
        throw std::invalid_argument("antenna counts must satisfy n_tx >= n_rx >= 1");
    }
    if (ris_rows < 1 || ris_cols < 1) {
        throw std::invalid_argument("RIS must have at least one element");
    }
    if (!std::isfinite(direct_pathloss_exponent)) {
        throw std::invalid_argument("direct_pathloss_exponent must be finite");
    }
    if (!(rician_k >= 0.0)) {
        throw std::invalid_argument("rician_k must be non-negative");
    }
}

double distance(const Point3& a, const Point3& b)
{
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

GeometryDistances compute_distances(const SystemGeometry& g)
{
    g.validate();
    GeometryDistances out;
    out.tx_mid = {0.0, g.tx_offset, 0.0};
    out.rx_mid = {g.wall_separation, g.rx_offset, 0.0};
    out.ris_center = {g.ris_offset, 0.0, 0.0};
    out.d0 = distance(out.tx_mid, out.rx_mid);
    out.d1 = distance(out.tx_mid, out.ris_center);
    out.d2 = distance(out.ris_center, out.rx_mid);
    out.tx = linear_array(out.tx_mid, g.n_tx, g.tx_spacing);
    out.rx = linear_array(out.rx_mid, g.n_rx, g.rx_spacing);

    out.ris.reserve(static_cast<std::size_t>(g.n_ris()));
    const double rc = 0.5 * (g.ris_rows - 1);
    const double cc = 0.5 * (g.ris_cols - 1);
    for (int r = 0; r < g.ris_rows; ++r) {
        for (int c = 0; c < g.ris_cols; ++c) {
            out.ris.push_back({out.ris_center.x + (c - cc) * g.ris_spacing, 0.0,
                               (r - rc) * g.ris_spacing});
        }
    }
    return out;
}

double path_loss_direct(double wavelength, double d0, double exponent)
{
    require_positive(wavelength, "wavelength");
    require_positive(d0, "d0");
    const double k = 4.0 * std::numbers::pi / wavelength;
    return k * k * std::pow(d0, exponent);
}

double path_loss_indirect(double wavelength, double tx_offset, double rx_offset, double d1,
                          double d2)
{
    require_positive(wavelength, "wavelength");
    require_positive(tx_offset, "tx_offset");
    require_positive(rx_offset, "rx_offset");
    require_positive(d1, "d1");
    require_positive(d2, "d2");
    const double ratio = tx_offset / d1 + rx_offset / d2;
    const double l2 = wavelength * wavelength;
    return l2 * l2 * ratio * ratio
           / (256.0 * std::numbers::pi * std::numbers::pi * d1 * d1 * d2 * d2);
}

CMatrix los_matrix(std::span<const Point3> rows, std::span<const Point3> cols, double wavelength)
{
    require_positive(wavelength, "wavelength");
    CMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    const double k = 2.0 * std::numbers::pi / wavelength;
    for (std::size_t m = 0; m < rows.size(); ++m) {
        for (std::size_t n = 0; n < cols.size(); ++n) {
            out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n))
                = std::polar(1.0, -k * distance(rows[m], cols[n]));
        }
    }
    return out;
}

CMatrix sample_rician(Eigen::Index rows, Eigen::Index cols, double k, const CMatrix& los, Rng& rng)
{
    if (los.rows() != rows || los.cols() != cols) {
        throw std::invalid_argument("sample_rician: LOS matrix shape mismatch");
    }
    if (!(k >= 0.0)) {
        throw std::invalid_argument("sample_rician: Rician factor must be non-negative");
    }
    if (k >= kPureLosK) {
        return los;
    }
    const double a = std::sqrt(k / (k + 1.0));
    const double b = std::sqrt(1.0 / (k + 1.0));
    CMatrix out(rows, cols);
    // Column-major fill order fixes the draw sequence.
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            out(r, c) = a * los(r, c) + b * complex_normal(rng);
        }
    }
    return out;
}

CMatrix ChannelSet::scaled_tx_ris() const
{
    if (!ris_enabled) {
        return CMatrix::Zero(tx_ris.rows(), tx_ris.cols());
    }
    return std::sqrt(indirect_gain) * tx_ris;
}

CMatrix ChannelSet::scaled_direct() const
{
    if (direct_blocked) {
        return CMatrix::Zero(direct.rows(), direct.cols());
    }
    return std::sqrt(direct_gain) * direct;
}

ChannelSet realize_channels(const SystemGeometry& geometry, Rng& rng, bool direct_blocked)
{
    const GeometryDistances d = compute_distances(geometry);
    const double k = geometry.rician_k;

    ChannelSet out;
    out.direct = sample_rician(geometry.n_rx, geometry.n_tx, k,
                               los_matrix(d.rx, d.tx, geometry.wavelength), rng);
    out.tx_ris = sample_rician(geometry.n_ris(), geometry.n_tx, k,
                               los_matrix(d.ris, d.tx, geometry.wavelength), rng);
    out.ris_rx = sample_rician(geometry.n_rx, geometry.n_ris(), k,
                               los_matrix(d.rx, d.ris, geometry.wavelength), rng);
    out.direct_gain = 1.0 / path_loss_direct(geometry.wavelength, d.d0,
                                             geometry.direct_pathloss_exponent);
    out.indirect_gain = path_loss_indirect(geometry.wavelength, geometry.tx_offset,
                                           geometry.rx_offset, d.d1, d.d2);
    out.direct_blocked = direct_blocked;
    return out;
}

CMatrix assemble_channel(const ChannelSet& channels, const CVector& theta)
{
    if (theta.size() != channels.n_ris()) {
        throw std::invalid_argument("assemble_channel: theta length does not match N_ris");
    }
    CMatrix h = channels.scaled_direct();
    if (channels.ris_enabled) {
        // diag(theta) H_1 as a row scaling.
        h.noalias() += std::sqrt(channels.indirect_gain)
                       * (channels.ris_rx * (theta.asDiagonal() * channels.tx_ris));
    }
    return h;
}

} // namespace riscr
