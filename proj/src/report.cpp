// SPDX-License-Identifier: Apache-2.0
//
// otfsim: matrix-vector simulation of time-frequency signaling over
// doubly dispersive channels.
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

#include "otfsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "otfsim/config.hpp"

namespace otfsim {

namespace {

std::string g9(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string db(double linear)
{
    return g9(10.0 * std::log10(linear));
}

} // namespace

void write_csv(std::ostream& os, const AggregateResult& result)
{
    const ScenarioConfig& cfg = result.config;
    os << kCsvHeader << '\n';
    for (const AggregateRow& r : result.rows)
    {
        os << cfg.name << ',' << to_string(r.system) << ',' << to_string(cfg.csi) << ',' << g9(r.snr_db) << ','
           << r.trials << ',' << g9(r.mean_capacity) << ',' << db(r.mean_gamma_channel) << ','
           << db(r.mean_gamma_composite) << ',' << g9(r.ser) << ',' << g9(r.ser_ci_lo) << ',' << g9(r.ser_ci_hi)
           << ',' << g9(r.ber) << ',' << cfg.base_seed << '\n';
    }
}

void write_metadata(std::ostream& os, const ScenarioConfig& cfg, const GridDesign& grid)
{
    os << "# " << kVersion << '\n';
    os << "# grid: time_slots=" << grid.time_slots << " tones=" << grid.tones << " dimension=" << grid.dimension
       << " pulse_duration=" << g9(grid.pulse_duration) << " tone_spacing=" << g9(grid.tone_spacing)
       << " packet_duration=" << g9(grid.packet_duration) << '\n';
    os << "# seeds: splitmix64 chain over (seed, trial, stream, snr index);"
          " streams channel=1 precoder=2 symbols=3 noise=4\n";
    os << "# EIG error rate: 4-QAM on each eigenchannel with SINR = snr * lambda_n (benchmark proxy)\n";
    os << to_config_text(cfg);
}

void write_trial_dump(std::ostream& os, const ScenarioConfig& cfg, const TrialDetail& detail, std::string_view what)
{
    const bool composite = what == "Hc";
    if (!composite && what != "sinr")
        throw std::invalid_argument("write_trial_dump: unknown dump kind");
    if (detail.systems.empty())
        return;

    os << 'n';
    for (const auto& sys : detail.systems)
    {
        if (composite)
            os << ',' << to_string(sys.system) << "_abs_H";
        for (std::size_t s = 0; s < sys.per_snr.size(); ++s)
            os << ',' << to_string(sys.system) << (composite ? "_Hc_" : "_sinr_") << g9(cfg.snr_db[s]) << "dB";
    }
    os << '\n';

    const Eigen::Index n = detail.systems.front().channel_diagonal.size();
    for (Eigen::Index i = 0; i < n; ++i)
    {
        os << i;
        for (const auto& sys : detail.systems)
        {
            if (composite)
                os << ',' << g9(std::abs(sys.channel_diagonal(i)));
            for (const auto& pt : sys.per_snr)
                os << ',' << g9(composite ? pt.composite_diagonal(i) : pt.sinr(i));
        }
        os << '\n';
    }
}

} // namespace otfsim
