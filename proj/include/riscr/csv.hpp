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

#ifndef RISCR_CSV_HPP
#define RISCR_CSV_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riscr/metrics.hpp"

namespace riscr {

// iter: one optimizer iterate of one realization.
// mean: across-realization mean at one iteration index (realization = -1).
// final: converged point of one realization, re-evaluated with the larger
//        noise budget. final-mean: mean of the final rows.
enum class RecordKind { Iteration, Mean, Final, FinalMean };

std::string_view to_string(RecordKind kind);

struct RunRecord {
    std::string run_id;
    std::string method;
    RecordKind kind = RecordKind::Iteration;
    int realization = 0;
    int iteration = 1;
    RateReport report;
    double wall_time = 0.0;  // seconds; summary only, never serialized
};

// Column order of every emitted file.
inline constexpr std::string_view kCsvHeader
    = "run_id,method,kind,realization,iteration,R0,MI,MI_stderr,MI_lower_bound,"
      "gaussian_rate,gaussian_ref,f_log";

// Fixed 12-decimal, locale-independent formatting.
void write_csv(std::ostream& out, std::span<const RunRecord> records);
void emit_csv(std::span<const RunRecord> records, const std::string& path);
std::vector<RunRecord> parse_csv(std::istream& in);

} // namespace riscr

#endif
