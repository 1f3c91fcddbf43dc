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

#include "riscr/riscr.h"

#include <exception>
#include <memory>
#include <new>
#include <string>

#include "riscr/harness.hpp"
#include "riscr/metrics.hpp"

struct riscr_config {
    riscr::ExperimentConfig value;
};

struct riscr_result {
    riscr::ExperimentResult value;
    std::string summary;
};

struct riscr_scenario {
    riscr::ChannelSet channels;
    riscr::ConstellationTable table;
    double noise_var;
};

namespace {

thread_local std::string g_last_error;

riscr_status fail(riscr_status status, const std::string& message)
{
    g_last_error = message;
    return status;
}

template <class Fn>
riscr_status guarded(Fn&& fn)
{
    try {
        fn();
        g_last_error.clear();
        return RISCR_OK;
    } catch (const riscr::ConfigError& e) {
        return fail(RISCR_E_CONFIG, e.what());
    } catch (const riscr::IoError& e) {
        return fail(RISCR_E_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(RISCR_E_INVALID_ARGUMENT, e.what());
    } catch (const std::domain_error& e) {
        return fail(RISCR_E_NUMERIC, e.what());
    } catch (const std::bad_alloc&) {
        return fail(RISCR_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RISCR_E_INTERNAL, e.what());
    }
}

} // namespace

extern "C" {

const char* riscr_version(void)
{
    return "1.0.0";
}

const char* riscr_status_string(riscr_status status)
{
    switch (status) {
    case RISCR_OK: return "ok";
    case RISCR_E_INVALID_ARGUMENT: return "invalid argument";
    case RISCR_E_CONFIG: return "configuration error";
    case RISCR_E_IO: return "i/o error";
    case RISCR_E_NUMERIC: return "numerical error";
    case RISCR_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* riscr_last_error(void)
{
    return g_last_error.c_str();
}

riscr_status riscr_config_create(riscr_config** out)
{
    if (!out) {
        return fail(RISCR_E_INVALID_ARGUMENT, "null output handle");
    }
    return guarded([&] { *out = new riscr_config{}; });
}

void riscr_config_destroy(riscr_config* config)
{
    delete config;
}

riscr_status riscr_config_load(riscr_config* config, const char* path)
{
    if (!config || !path) {
        return fail(RISCR_E_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        riscr::ExperimentConfig next = config->value;
        riscr::apply_config_file(next, path);
        config->value = std::move(next);
    });
}

riscr_status riscr_config_set(riscr_config* config, const char* key, const char* value)
{
    if (!config || !key || !value) {
        return fail(RISCR_E_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] { riscr::apply_setting(config->value, key, value); });
}

riscr_status riscr_config_get(const riscr_config* config, const char* key, char* buf,
                              size_t buf_len, size_t* needed)
{
    if (!config || !key) {
        return fail(RISCR_E_INVALID_ARGUMENT, "null argument");
    }
    std::string value;
    const riscr_status st = guarded([&] { value = riscr::get_setting(config->value, key); });
    if (st != RISCR_OK) {
        return st;
    }
    if (needed) {
        *needed = value.size() + 1;
    }
    if (!buf || buf_len < value.size() + 1) {
        return fail(RISCR_E_INVALID_ARGUMENT, "buffer too small");
    }
    value.copy(buf, value.size());
    buf[value.size()] = '\0';
    return RISCR_OK;
}

riscr_status riscr_run(const riscr_config* config, riscr_command command, riscr_result** out)
{
    if (!config || !out) {
        return fail(RISCR_E_INVALID_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        auto res = std::make_unique<riscr_result>();
        const riscr::ExperimentConfig& cfg = config->value;
        switch (command) {
        case RISCR_CMD_OPTIMIZE: res->value = riscr::run_experiment(cfg); break;
        case RISCR_CMD_SWEEP: res->value = riscr::run_sweep(cfg); break;
        case RISCR_CMD_BASELINE_NORIS: res->value = riscr::run_no_ris_baseline(cfg); break;
        case RISCR_CMD_REPRODUCE_FIG2: res->value = riscr::reproduce_fig2(cfg); break;
        case RISCR_CMD_REPRODUCE_FIG3: res->value = riscr::reproduce_fig3(cfg); break;
        case RISCR_CMD_GRADCHECK: {
            const riscr::GradCheckReport rep = riscr::gradcheck(cfg);
            res->value.gradcheck = rep;
            res->value.passed = rep.pass;
            break;
        }
        default: throw std::invalid_argument("unknown command");
        }
        res->summary = riscr::format_summary(res->value);
        *out = res.release();
    });
}

void riscr_result_destroy(riscr_result* result)
{
    delete result;
}

riscr_status riscr_result_write_csv(const riscr_result* result, const char* path)
{
    if (!result || !path) {
        return fail(RISCR_E_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] { riscr::emit_csv(result->value.records, path); });
}

const char* riscr_result_summary(const riscr_result* result)
{
    return result ? result->summary.c_str() : "";
}

size_t riscr_result_row_count(const riscr_result* result)
{
    return result ? result->value.records.size() : 0;
}

size_t riscr_result_arm_count(const riscr_result* result)
{
    return result ? result->value.arms.size() : 0;
}

riscr_status riscr_result_arm(const riscr_result* result, size_t index, riscr_arm_summary* out)
{
    if (!result || !out) {
        return fail(RISCR_E_INVALID_ARGUMENT, "null argument");
    }
    if (index >= result->value.arms.size()) {
        return fail(RISCR_E_INVALID_ARGUMENT, "arm index out of range");
    }
    const riscr::ArmSummary& a = result->value.arms[index];
    out->run_id = a.run_id.c_str();
    out->method = a.method.c_str();
    out->realizations = a.final_r0.size();
    out->r0 = a.mean_r0();
    out->mi = a.mean_mi();
    out->mi_stderr = a.mean_mi_stderr();
    out->gaussian_rate = a.mean_gaussian_rate();
    out->gaussian_ref = a.mean_gaussian_ref();
    out->mean_iterations = a.mean_iterations();
    return RISCR_OK;
}

int riscr_result_passed(const riscr_result* result)
{
    return result && result->value.passed ? 1 : 0;
}

riscr_status riscr_scenario_create(const riscr_config* config, uint64_t realization,
                                   riscr_scenario** out)
{
    if (!config || !out) {
        return fail(RISCR_E_INVALID_ARGUMENT, "null argument");
    }
    *out = nullptr;
    return guarded([&] {
        const riscr::ExperimentConfig& cfg = config->value;
        cfg.validate();
        riscr::Rng rng(riscr::derive_seed(cfg.seed, riscr::Stream::Channel, {realization}));
        riscr::ChannelSet channels = riscr::realize_channels(cfg.geometry, rng, cfg.direct_blocked);
        channels.ris_enabled = cfg.ris_enabled;
        const auto alphabet = riscr::build_alphabet(cfg.modulation_order, cfg.modulation);
        *out = new riscr_scenario{std::move(channels),
                                  riscr::enumerate_vectors(alphabet, cfg.geometry.n_rx,
                                                           cfg.max_symbols),
                                  cfg.noise_variance()};
    });
}

void riscr_scenario_destroy(riscr_scenario* scenario)
{
    delete scenario;
}

riscr_status riscr_scenario_dims(const riscr_scenario* s, size_t* n_tx, size_t* n_rx,
                                 size_t* n_ris, size_t* n_symbols)
{
    if (!s) {
        return fail(RISCR_E_INVALID_ARGUMENT, "null scenario");
    }
    if (n_tx) *n_tx = static_cast<size_t>(s->channels.n_tx());
    if (n_rx) *n_rx = static_cast<size_t>(s->channels.n_rx());
    if (n_ris) *n_ris = static_cast<size_t>(s->channels.n_ris());
    if (n_symbols) *n_symbols = s->table.n_symbols();
    return RISCR_OK;
}

riscr_status riscr_scenario_cutoff_rate(const riscr_scenario* s, const double* theta,
                                        const double* precoder, double* r0)
{
    if (!s || !theta || !precoder || !r0) {
        return fail(RISCR_E_INVALID_ARGUMENT, "null argument");
    }
    return guarded([&] {
        const auto nt = s->channels.n_tx();
        const auto nr = s->channels.n_rx();
        const auto nris = s->channels.n_ris();
        riscr::DesignPoint p;
        p.theta.resize(nris);
        for (Eigen::Index l = 0; l < nris; ++l) {
            p.theta(l) = {theta[2 * l], theta[2 * l + 1]};
        }
        p.precoder.resize(nt, nr);
        for (Eigen::Index k = 0; k < nt * nr; ++k) {
            p.precoder.data()[k] = {precoder[2 * k], precoder[2 * k + 1]};
        }
        *r0 = riscr::cutoff_rate(p, s->channels, s->table, s->noise_var);
    });
}

} // extern "C"
