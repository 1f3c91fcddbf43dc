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

#include "riscr/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace riscr {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(std::string_view key, std::string_view text)
{
    const std::string v = trim(text);
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
        throw ConfigError("invalid value '" + v + "' for " + std::string(key));
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view text)
{
    const std::string v = trim(text);
    if (v == "true" || v == "1" || v == "yes" || v == "on") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off") {
        return false;
    }
    throw ConfigError("invalid boolean '" + v + "' for " + std::string(key));
}

std::string format_double(double v)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

struct Field {
    std::function<void(ExperimentConfig&, std::string_view key, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

#define RISCR_DOUBLE(member)                                                                   \
    Field                                                                                      \
    {                                                                                          \
        [](ExperimentConfig& c, std::string_view k, std::string_view v) {                      \
            c.member = parse_number<double>(k, v);                                             \
        },                                                                                     \
            [](const ExperimentConfig& c) { return format_double(c.member); }                  \
    }
#define RISCR_INT(member, type)                                                                \
    Field                                                                                      \
    {                                                                                          \
        [](ExperimentConfig& c, std::string_view k, std::string_view v) {                      \
            c.member = parse_number<type>(k, v);                                               \
        },                                                                                     \
            [](const ExperimentConfig& c) { return std::to_string(c.member); }                 \
    }
#define RISCR_BOOL(member)                                                                     \
    Field                                                                                      \
    {                                                                                          \
        [](ExperimentConfig& c, std::string_view k, std::string_view v) {                      \
            c.member = parse_bool(k, v);                                                       \
        },                                                                                     \
            [](const ExperimentConfig& c) { return std::string(c.member ? "true" : "false"); } \
    }

const std::map<std::string, Field, std::less<>>& fields()
{
    static const std::map<std::string, Field, std::less<>> table = {
        {"geometry.wavelength", RISCR_DOUBLE(geometry.wavelength)},
        {"geometry.wall_separation", RISCR_DOUBLE(geometry.wall_separation)},
        {"geometry.tx_offset", RISCR_DOUBLE(geometry.tx_offset)},
        {"geometry.rx_offset", RISCR_DOUBLE(geometry.rx_offset)},
        {"geometry.ris_offset", RISCR_DOUBLE(geometry.ris_offset)},
        {"geometry.tx_spacing", RISCR_DOUBLE(geometry.tx_spacing)},
        {"geometry.rx_spacing", RISCR_DOUBLE(geometry.rx_spacing)},
        {"geometry.ris_spacing", RISCR_DOUBLE(geometry.ris_spacing)},
        {"geometry.n_tx", RISCR_INT(geometry.n_tx, int)},
        {"geometry.n_rx", RISCR_INT(geometry.n_rx, int)},
        {"geometry.ris_rows", RISCR_INT(geometry.ris_rows, int)},
        {"geometry.ris_cols", RISCR_INT(geometry.ris_cols, int)},
        {"channel.pathloss_exponent", RISCR_DOUBLE(geometry.direct_pathloss_exponent)},
        {"channel.rician_k", RISCR_DOUBLE(geometry.rician_k)},
        {"channel.direct_blocked", RISCR_BOOL(direct_blocked)},
        {"channel.ris_enabled", RISCR_BOOL(ris_enabled)},
        {"modulation.kind",
         Field{[](ExperimentConfig& c, std::string_view k, std::string_view v) {
                   const std::string s = trim(v);
                   if (s == "qam" || s == "QAM") {
                       c.modulation = Modulation::Qam;
                   } else if (s == "psk" || s == "PSK") {
                       c.modulation = Modulation::Psk;
                   } else {
                       throw ConfigError("invalid value '" + s + "' for " + std::string(k));
                   }
               },
               [](const ExperimentConfig& c) {
                   return std::string(c.modulation == Modulation::Qam ? "qam" : "psk");
               }}},
        {"modulation.order", RISCR_INT(modulation_order, int)},
        {"modulation.max_symbols", RISCR_INT(max_symbols, std::size_t)},
        {"noise.power_db", RISCR_DOUBLE(noise_power_db)},
        {"experiment.method",
         Field{[](ExperimentConfig& c, std::string_view k, std::string_view v) {
                   const std::string s = trim(v);
                   if (s == "pgm" || s == "PGM") {
                       c.method = Method::Pgm;
                   } else if (s == "sca" || s == "SCA") {
                       c.method = Method::Sca;
                   } else if (s == "both") {
                       c.method = Method::Both;
                   } else {
                       throw ConfigError("invalid value '" + s + "' for " + std::string(k));
                   }
               },
               [](const ExperimentConfig& c) {
                   switch (c.method) {
                   case Method::Pgm: return std::string("pgm");
                   case Method::Sca: return std::string("sca");
                   default: return std::string("both");
                   }
               }}},
        {"experiment.realizations", RISCR_INT(n_realizations, int)},
        {"experiment.seed", RISCR_INT(seed, std::uint64_t)},
        {"experiment.threads", RISCR_INT(threads, int)},
        {"experiment.run_id",
         Field{[](ExperimentConfig& c, std::string_view, std::string_view v) { c.run_id = trim(v); },
               [](const ExperimentConfig& c) { return c.run_id; }}},
        {"mi.draws", RISCR_INT(mi_draws, std::size_t)},
        {"mi.final_draws", RISCR_INT(mi_final_draws, std::size_t)},
        {"pgm.L0", RISCR_DOUBLE(pgm.initial_step)},
        {"pgm.delta", RISCR_DOUBLE(pgm.sufficient_decrease)},
        {"pgm.rho", RISCR_DOUBLE(pgm.shrink)},
        {"pgm.max_iters", RISCR_INT(pgm.max_iters, int)},
        {"pgm.rel_tol", RISCR_DOUBLE(pgm.rel_tol)},
        {"pgm.max_backtracks", RISCR_INT(pgm.max_backtracks, int)},
        {"pgm.patience", RISCR_INT(pgm.patience, int)},
        {"sca.outer_iters", RISCR_INT(sca.outer_max_iters, int)},
        {"sca.outer_rel_tol", RISCR_DOUBLE(sca.outer_rel_tol)},
        {"sca.inner_iters", RISCR_INT(sca.inner_max_iters, int)},
        {"sca.tol", RISCR_DOUBLE(sca.inner_tol)},
        {"sca.boundary_tol", RISCR_DOUBLE(sca.boundary_tol)},
        {"sca.patience", RISCR_INT(sca.patience, int)},
        {"gradcheck.points", RISCR_INT(gradcheck.points, int)},
        {"gradcheck.step", RISCR_DOUBLE(gradcheck.step)},
        {"gradcheck.threshold", RISCR_DOUBLE(gradcheck.threshold)},
        {"gradcheck.auto_noise", RISCR_BOOL(gradcheck.auto_noise)},
        {"sweep.grid",
         Field{[](ExperimentConfig& c, std::string_view, std::string_view v) {
                   c.sweep_grid = trim(v);
               },
               [](const ExperimentConfig& c) { return c.sweep_grid; }}},
    };
    return table;
}

#undef RISCR_DOUBLE
#undef RISCR_INT
#undef RISCR_BOOL

} // namespace

double ExperimentConfig::noise_variance() const
{
    return std::pow(10.0, noise_power_db / 10.0);
}

void ExperimentConfig::validate() const
{
    try {
        geometry.validate();
        pgm.validate();
        sca.validate();
        (void)build_alphabet(modulation_order, modulation);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(noise_variance() > 0.0) || !std::isfinite(noise_variance())) {
        throw ConfigError("noise.power_db must give a positive finite variance");
    }
    if (n_realizations < 1) {
        throw ConfigError("experiment.realizations must be at least 1");
    }
    if (mi_draws < 1 || mi_final_draws < 1) {
        throw ConfigError("mi.draws and mi.final_draws must be at least 1");
    }
    if (threads < 1) {
        throw ConfigError("experiment.threads must be at least 1");
    }
    if (gradcheck.points < 1 || !(gradcheck.step > 0.0) || !(gradcheck.threshold > 0.0)) {
        throw ConfigError("gradcheck settings must be positive");
    }
}

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value)
{
    const auto it = fields().find(key);
    if (it == fields().end()) {
        throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    }
    it->second.set(config, key, value);
}

std::string get_setting(const ExperimentConfig& config, std::string_view key)
{
    const auto it = fields().find(key);
    if (it == fields().end()) {
        throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    }
    return it->second.get(config);
}

const std::vector<std::string>& setting_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& [k, _] : fields()) {
            out.push_back(k);
        }
        return out;
    }();
    return keys;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in)
{
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

void apply_config_file(ExperimentConfig& config, const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    for (const auto& [k, v] : parse_key_values(in)) {
        apply_setting(config, k, v);
    }
}

} // namespace riscr
