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

#include "riscr/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "riscr/types.hpp"

namespace riscr {

namespace {

constexpr int kDecimals = 12;

void put_double(std::string& line, double v)
{
    if (std::isnan(v)) {
        line += "nan";
        return;
    }
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::fixed, kDecimals);
    line.append(buf.data(), res.ptr);
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

double get_double(const std::string& s)
{
    if (s == "nan") {
        return std::nan("");
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad numeric CSV field '" + s + "'");
    }
    return v;
}

int get_int(const std::string& s)
{
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::invalid_argument("bad integer CSV field '" + s + "'");
    }
    return v;
}

RecordKind get_kind(const std::string& s)
{
    for (RecordKind k : {RecordKind::Iteration, RecordKind::Mean, RecordKind::Final,
                         RecordKind::FinalMean}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw std::invalid_argument("bad record kind '" + s + "'");
}

} // namespace

std::string_view to_string(RecordKind kind)
{
    switch (kind) {
    case RecordKind::Iteration: return "iter";
    case RecordKind::Mean: return "mean";
    case RecordKind::Final: return "final";
    case RecordKind::FinalMean: return "final-mean";
    }
    return "iter";
}

void write_csv(std::ostream& out, std::span<const RunRecord> records)
{
    out << kCsvHeader << '\n';
    std::string line;
    for (const auto& r : records) {
        line.clear();
        line += r.run_id;
        line += ',';
        line += r.method;
        line += ',';
        line += to_string(r.kind);
        line += ',';
        line += std::to_string(r.realization);
        line += ',';
        line += std::to_string(r.iteration);
        for (double v : {r.report.r0, r.report.mi, r.report.mi_stderr, r.report.mi_lower_bound,
                         r.report.gaussian_rate, r.report.gaussian_ref, r.report.f_log}) {
            line += ',';
            put_double(line, v);
        }
        line += '\n';
        out << line;
    }
}

void emit_csv(std::span<const RunRecord> records, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_csv(out, records);
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

std::vector<RunRecord> parse_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw std::invalid_argument("missing or unexpected CSV header");
    }
    std::vector<RunRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split(line);
        if (f.size() != 12) {
            throw std::invalid_argument("CSV row has " + std::to_string(f.size()) + " fields");
        }
        RunRecord r;
        r.run_id = f[0];
        r.method = f[1];
        r.kind = get_kind(f[2]);
        r.realization = get_int(f[3]);
        r.iteration = get_int(f[4]);
        r.report.r0 = get_double(f[5]);
        r.report.mi = get_double(f[6]);
        r.report.mi_stderr = get_double(f[7]);
        r.report.mi_lower_bound = get_double(f[8]);
        r.report.gaussian_rate = get_double(f[9]);
        r.report.gaussian_ref = get_double(f[10]);
        r.report.f_log = get_double(f[11]);
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace riscr
