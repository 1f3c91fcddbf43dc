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

// Command-line front end. Talks to the library only through riscr.h.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "riscr/riscr.h"

namespace {

struct ConfigDeleter {
    void operator()(riscr_config* c) const { riscr_config_destroy(c); }
};
struct ResultDeleter {
    void operator()(riscr_result* r) const { riscr_result_destroy(r); }
};

struct Options {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out;
    std::string vary;
    std::optional<long long> seed;
    std::optional<double> l0, delta, rho, rel_tol, sca_tol, noise_db;
    std::optional<int> max_iters, sca_outer, sca_inner, realizations, threads;
    std::optional<std::string> method;
    bool blocked = false;
    bool unblocked = false;
};

bool check(riscr_status st, const std::string& what)
{
    if (st == RISCR_OK) {
        return true;
    }
    std::cerr << "riscr-cli: " << what << ": " << riscr_status_string(st) << ": "
              << riscr_last_error() << '\n';
    return false;
}

template <class T>
std::string text(const T& v)
{
    if constexpr (std::is_same_v<T, std::string>) {
        return v;
    } else {
        return CLI::detail::to_string(v);
    }
}

bool apply(riscr_config* cfg, const char* key, const std::string& value)
{
    return check(riscr_config_set(cfg, key, value.c_str()), std::string("setting ") + key);
}

// Subcommand defaults first, then the config file, then --set pairs, then
// the dedicated flags.
bool build_config(riscr_config* cfg, const Options& o,
                  const std::vector<std::pair<const char*, const char*>>& defaults)
{
    for (const auto& [k, v] : defaults) {
        if (!apply(cfg, k, v)) {
            return false;
        }
    }
    if (!o.config_path.empty() &&
        !check(riscr_config_load(cfg, o.config_path.c_str()), "loading " + o.config_path)) {
        return false;
    }
    for (const std::string& kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "riscr-cli: --set expects key=value, got '" << kv << "'\n";
            return false;
        }
        if (!apply(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1))) {
            return false;
        }
    }
    const std::vector<std::pair<const char*, std::optional<std::string>>> flags = {
        {"experiment.seed", o.seed ? std::optional(text(*o.seed)) : std::nullopt},
        {"pgm.L0", o.l0 ? std::optional(text(*o.l0)) : std::nullopt},
        {"pgm.delta", o.delta ? std::optional(text(*o.delta)) : std::nullopt},
        {"pgm.rho", o.rho ? std::optional(text(*o.rho)) : std::nullopt},
        {"pgm.max_iters", o.max_iters ? std::optional(text(*o.max_iters)) : std::nullopt},
        {"pgm.rel_tol", o.rel_tol ? std::optional(text(*o.rel_tol)) : std::nullopt},
        {"sca.outer_iters", o.sca_outer ? std::optional(text(*o.sca_outer)) : std::nullopt},
        {"sca.inner_iters", o.sca_inner ? std::optional(text(*o.sca_inner)) : std::nullopt},
        {"sca.tol", o.sca_tol ? std::optional(text(*o.sca_tol)) : std::nullopt},
        {"experiment.realizations",
         o.realizations ? std::optional(text(*o.realizations)) : std::nullopt},
        {"experiment.threads", o.threads ? std::optional(text(*o.threads)) : std::nullopt},
        {"experiment.method", o.method},
        {"noise.power_db", o.noise_db ? std::optional(text(*o.noise_db)) : std::nullopt},
        {"sweep.grid", o.vary.empty() ? std::nullopt : std::optional(o.vary)},
    };
    for (const auto& [k, v] : flags) {
        if (v && !apply(cfg, k, *v)) {
            return false;
        }
    }
    if (o.blocked && !apply(cfg, "channel.direct_blocked", "true")) {
        return false;
    }
    if (o.unblocked && !apply(cfg, "channel.direct_blocked", "false")) {
        return false;
    }
    return true;
}

int execute(riscr_command command, const Options& o,
            const std::vector<std::pair<const char*, const char*>>& defaults)
{
    riscr_config* raw_cfg = nullptr;
    if (!check(riscr_config_create(&raw_cfg), "creating config")) {
        return 2;
    }
    std::unique_ptr<riscr_config, ConfigDeleter> cfg(raw_cfg);
    if (!build_config(cfg.get(), o, defaults)) {
        return 2;
    }
    riscr_result* raw_res = nullptr;
    if (!check(riscr_run(cfg.get(), command, &raw_res), "run failed")) {
        return 2;
    }
    std::unique_ptr<riscr_result, ResultDeleter> res(raw_res);
    if (!o.out.empty() &&
        !check(riscr_result_write_csv(res.get(), o.out.c_str()), "writing " + o.out)) {
        return 2;
    }
    std::cout << riscr_result_summary(res.get());
    return riscr_result_passed(res.get()) ? 0 : 1;
}

void add_common(CLI::App* sub, Options& o)
{
    sub->add_option("-c,--config", o.config_path, "key = value configuration file");
    sub->add_option("--set", o.sets, "override a configuration key (key=value), repeatable");
    sub->add_option("-o,--out", o.out, "CSV output path");
    sub->add_option("--seed", o.seed, "base random seed");
    sub->add_option("--L0", o.l0, "PGM initial step size");
    sub->add_option("--delta", o.delta, "PGM sufficient-decrease constant");
    sub->add_option("--rho", o.rho, "PGM backtracking factor");
    sub->add_option("--max-iters", o.max_iters, "PGM iteration cap");
    sub->add_option("--rel-tol", o.rel_tol, "PGM relative-decrease tolerance");
    sub->add_option("--sca-outer-iters", o.sca_outer, "SCA outer iteration cap");
    sub->add_option("--sca-inner-iters", o.sca_inner, "SCA inner iteration cap");
    sub->add_option("--sca-tol", o.sca_tol, "SCA inner tolerance");
    sub->add_option("--realizations", o.realizations, "number of channel realizations");
    sub->add_option("--threads", o.threads, "worker threads");
    sub->add_option("--noise-db", o.noise_db, "noise power in dB");
    sub->add_option("--method", o.method, "pgm, sca or both");
    sub->add_flag("--blocked", o.blocked, "block the direct link");
    sub->add_flag("--direct", o.unblocked, "keep the direct link");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cutoff-rate optimization for RIS-aided MIMO links"};
    app.set_version_flag("--version", std::string(riscr_version()));
    app.require_subcommand(1);

    Options o;
    struct Entry {
        const char* name;
        const char* help;
        riscr_command command;
        std::vector<std::pair<const char*, const char*>> defaults;
    };
    const std::vector<Entry> entries = {
        {"optimize", "optimize precoder and RIS phases", RISCR_CMD_OPTIMIZE, {}},
        {"sweep", "grid over configuration keys (--vary)", RISCR_CMD_SWEEP, {}},
        {"gradcheck",
         "compare analytic and finite-difference gradients",
         RISCR_CMD_GRADCHECK,
         {{"geometry.n_tx", "4"},
          {"geometry.n_rx", "2"},
          {"geometry.ris_rows", "2"},
          {"geometry.ris_cols", "4"},
          {"modulation.order", "2"}}},
        {"reproduce-fig2", "rate traces with and without the RIS", RISCR_CMD_REPRODUCE_FIG2, {}},
        {"reproduce-fig3", "mutual information for M = 4 and 16", RISCR_CMD_REPRODUCE_FIG3, {}},
        {"baseline-noris", "precoder-only optimization without the RIS",
         RISCR_CMD_BASELINE_NORIS, {}},
    };

    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, o);
        if (e.command == RISCR_CMD_SWEEP) {
            sub->add_option("--vary", o.vary, "grid axes, e.g. noise.power_db=-115,-110;modulation.order=4,16");
        }
        subs.emplace_back(sub, &e);
    }

    CLI11_PARSE(app, argc, argv);

    for (const auto& [sub, entry] : subs) {
        if (sub->parsed()) {
            return execute(entry->command, o, entry->defaults);
        }
    }
    return 2;
}
