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

#ifndef RISCR_CHANNEL_MODEL_HPP
#define RISCR_CHANNEL_MODEL_HPP

#include <span>
#include <vector>

#include "riscr/rng.hpp"
#include "riscr/types.hpp"

namespace riscr {

// Physical layout of the link. The transmit and receive arrays sit on two
// parallel walls (planes x = 0 and x = wall_separation); the RIS lies on the
// perpendicular wall y = 0. Everything is at height z = 0 except the RIS
// rows, which spread vertically around the RIS center.
struct SystemGeometry {
    double wavelength = 0.15;
    double wall_separation = 500.0;
    double tx_offset = 20.0;   // tx midpoint to RIS plane
    double rx_offset = 20.0;   // rx midpoint to RIS plane
    double ris_offset = 30.0;  // RIS center to tx plane
    double tx_spacing = 0.075;
    double rx_spacing = 0.075;
    double ris_spacing = 0.075;
    int n_tx = 8;
    int n_rx = 2;
    int ris_rows = 15;
    int ris_cols = 15;
    double direct_pathloss_exponent = 3.0;
    double rician_k = 1.0;

    int n_ris() const { return ris_rows * ris_cols; }

    // Throws std::invalid_argument on non-positive lengths or bad counts.
    void validate() const;
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

double distance(const Point3& a, const Point3& b);

struct GeometryDistances {
    double d0 = 0.0;  // tx midpoint to rx midpoint
    double d1 = 0.0;  // tx midpoint to RIS center
    double d2 = 0.0;  // RIS center to rx midpoint
    Point3 tx_mid;
    Point3 rx_mid;
    Point3 ris_center;
    std::vector<Point3> tx;
    std::vector<Point3> rx;
    std::vector<Point3> ris;  // row-major over (row, col)
};

GeometryDistances compute_distances(const SystemGeometry& geometry);

// Direct-link path loss beta_DIR = (4 pi / lambda)^2 d0^alpha (a loss, >= 1 in
// practice). The channel composition applies its inverse.
double path_loss_direct(double wavelength, double d0, double exponent);

// Far-field gain of the reflected link, i.e. the inverse loss
// lambda^4 (l_t/d1 + l_r/d2)^2 / (256 pi^2 d1^2 d2^2).
double path_loss_indirect(double wavelength, double tx_offset, double rx_offset, double d1,
                          double d2);

// Deterministic line-of-sight matrix, entry (m, n) = exp(-j 2 pi |a_m - b_n| / lambda).
CMatrix los_matrix(std::span<const Point3> rows, std::span<const Point3> cols, double wavelength);

// Rician draw sqrt(K/(K+1)) los + sqrt(1/(K+1)) W with W ~ CN(0, 1) i.i.d.
// K >= 1e12 is treated as the pure line-of-sight limit (no draws consumed).
CMatrix sample_rician(Eigen::Index rows, Eigen::Index cols, double k, const CMatrix& los, Rng& rng);

struct ChannelSet {
    CMatrix direct;   // H_D,  N_r x N_t
    CMatrix tx_ris;   // H_1,  N_ris x N_t
    CMatrix ris_rx;   // H_2,  N_r x N_ris
    double direct_gain = 1.0;    // beta_DIR^-1
    double indirect_gain = 1.0;  // beta_INDIR^-1
    bool direct_blocked = false;
    bool ris_enabled = true;

    Eigen::Index n_tx() const { return direct.cols(); }
    Eigen::Index n_rx() const { return direct.rows(); }
    Eigen::Index n_ris() const { return tx_ris.rows(); }

    // sqrt(beta_INDIR^-1) H_1, or zero when the RIS is disabled.
    CMatrix scaled_tx_ris() const;
    // sqrt(beta_DIR^-1) H_D, or zero when the direct link is blocked.
    CMatrix scaled_direct() const;
};

// Samples H_D, H_1 and H_2 (in that order, always all three so blocked and
// unblocked scenarios share H_1/H_2 for a given stream) around their
// geometric LOS components.
ChannelSet realize_channels(const SystemGeometry& geometry, Rng& rng, bool direct_blocked);

// H(theta) = sqrt(beta_DIR^-1) H_D + sqrt(beta_INDIR^-1) H_2 diag(theta) H_1.
CMatrix assemble_channel(const ChannelSet& channels, const CVector& theta);

} // namespace riscr

#endif
