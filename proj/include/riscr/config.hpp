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

#ifndef RISCR_CONFIG_HPP
#define RISCR_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "riscr/channel_model.hpp"
#include "riscr/pgm.hpp"
#include "riscr/sca.hpp"
#include "riscr/signal_model.hpp"

namespace riscr {

enum class Method { Pgm, Sca, Both };

struct GradCheckSettings {
    int points = 10;
    double step = 1e-6;
    double threshold = 1e-5;
    // Rescale sigma^2 per point so the typical exponent Phi/4 sigma^2 is 1.
    bool auto_noise = true;
};

// Everything a run needs. Defaults reproduce the reference scenario
// (2 GHz, 8x2 MIMO, 15x15 RIS, K = 1, 4-QAM, sigma^2 = -110 dB).
struct ExperimentConfig {
    SystemGeometry geometry;
    Modulation modulation = Modulation::Qam;
    int modulation_order = 4;
    std::size_t max_symbols = kDefaultSymbolCap;
    double noise_power_db = -110.0;
    Method method = Method::Both;
    bool direct_blocked = false;
    bool ris_enabled = true;
    int n_realizations = 30;
    std::size_t mi_draws = 500;         // noise vectors per iteration evaluation
    std::size_t mi_final_draws = 5000;  // noise vectors for the converged point
    std::uint64_t seed = 1;
    int threads = 1;
    std::string run_id = "run";
    std::string sweep_grid;  // "key=v1,v2;key2=w1,w2"
    PgmParams pgm;
    ScaParams sca;
    GradCheckSettings gradcheck;

    double noise_variance() const;
    void validate() const;
};

// Set one dotted key (e.g. "pgm.L0", "modulation.order"). Throws ConfigError
// for unknown keys or unparsable values.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);
std::string get_setting(const ExperimentConfig& config, std::string_view key);
const std::vector<std::string>& setting_keys();

// "key = value" lines; '#' starts a comment; blank lines ignored.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in);
void apply_config_file(ExperimentConfig& config, const std::string& path);

} // namespace riscr

#endif
