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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "otfsim/montecarlo.hpp"
#include "otfsim/report.hpp"

using namespace otfsim;

namespace {

// 3 x 27 grid (N = 81) with the moderate spreads.
ScenarioConfig small_config()
{
    ScenarioConfig cfg;
    cfg.name = "small";
    cfg.bandwidth = 3e6;
    cfg.max_delay = 300e-9;
    cfg.max_doppler = 1850.0;
    cfg.num_paths = 30;
    cfg.time_slots = 3;
    cfg.snr_db = {0.0, 10.0, 20.0};
    cfg.trials = 4;
    cfg.systems = {System::ostf, System::otfs, System::ofdm, System::ostf_u, System::eig};
    cfg.csi = CsiMode::full;
    cfg.base_seed = 11;
    return cfg;
}

ChannelRealization flat_channel(std::size_t)
{
    ChannelRealization ch;
    ch.paths.push_back({0.0, 0.0, cplx(1.0, 0.0)});
    ch.path_powers = {1.0};
    return ch;
}

std::string csv_of(const AggregateResult& r)
{
    std::ostringstream os;
    write_csv(os, r);
    return os.str();
}

double q_function(double x)
{
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

} // namespace

TEST_CASE("system names")
{
    for (System s : {System::eig, System::ofdm, System::ostf, System::ostf_u, System::otfs})
        CHECK(parse_system(to_string(s)) == s);
    CHECK(parse_system("ostf_u") == System::ostf_u);
    CHECK_FALSE(parse_system("otf").has_value());
}

TEST_CASE("seed derivation")
{
    const auto a = derive_seed(1, 0, SeedStream::channel);
    CHECK(a == derive_seed(1, 0, SeedStream::channel));
    CHECK(a != derive_seed(1, 1, SeedStream::channel));
    CHECK(a != derive_seed(2, 0, SeedStream::channel));
    CHECK(a != derive_seed(1, 0, SeedStream::noise));
    CHECK(derive_seed(1, 0, SeedStream::noise, 0) != derive_seed(1, 0, SeedStream::noise, 1));
}

TEST_CASE("config checks list every problem")
{
    ScenarioConfig cfg = small_config();
    CHECK(check(cfg).empty());
    cfg.trials = 0;
    cfg.snr_db.clear();
    cfg.systems.clear();
    cfg.bandwidth = -1.0;
    CHECK(check(cfg).size() == 4);
}

TEST_CASE("campaign result does not depend on the thread count")
{
    ScenarioConfig cfg = small_config();
    cfg.trials = 6;
    const std::string one = csv_of(run_campaign(cfg, {.threads = 1}));
    const std::string three = csv_of(run_campaign(cfg, {.threads = 3}));
    CHECK(one == three);
    CHECK(one == csv_of(run_campaign(cfg, {.threads = 1})));
}

TEST_CASE("every system sees the same symbols and noise")
{
    ScenarioConfig cfg = small_config();
    cfg.trials = 1;
    std::map<std::pair<std::size_t, System>, std::pair<CVector, CVector>> seen;
    RunOptions opt;
    opt.observer = [&](System s, std::size_t k, const CVector& x, const CVector& w) { seen[{k, s}] = {x, w}; };
    run_trial(cfg, 0, opt);
    CHECK(seen.size() == cfg.snr_db.size() * cfg.systems.size());
    for (std::size_t k = 0; k < cfg.snr_db.size(); ++k)
    {
        const auto& ref = seen.at({k, System::ostf});
        for (System s : cfg.systems)
        {
            CHECK(seen.at({k, s}).first == ref.first);
            CHECK(seen.at({k, s}).second == ref.second);
        }
    }
    // Different SNR points draw fresh noise.
    CHECK(seen.at({0, System::ostf}).second != seen.at({1, System::ostf}).second);
}

TEST_CASE("aggregate counts and orderings")
{
    ScenarioConfig cfg = small_config();
    cfg.trials = 5;
    const AggregateResult r = run_campaign(cfg);
    CHECK(r.rows.size() == cfg.systems.size() * cfg.snr_db.size());
    for (const AggregateRow& row : r.rows)
    {
        CAPTURE(to_string(row.system));
        CHECK(row.trials == cfg.trials);
        CHECK(row.symbols == cfg.trials * r.grid.dimension);
        CHECK(row.ser >= row.ber);
        CHECK(row.ber >= row.ser / 2.0);
        CHECK(row.ser_ci_lo <= row.ser);
        CHECK(row.ser_ci_hi >= row.ser);
    }
    for (System s : cfg.systems)
    {
        CHECK(r.row(s, 0.0).mean_capacity < r.row(s, 10.0).mean_capacity);
        CHECK(r.row(s, 10.0).mean_capacity < r.row(s, 20.0).mean_capacity);
        // EIG bounds every linear receiver.
        CHECK(r.row(s, 20.0).mean_capacity <= r.row(System::eig, 20.0).mean_capacity + 1e-12);
    }
    CHECK_THROWS_AS(r.row(System::ostf, 5.0), std::out_of_range);
}

TEST_CASE("single-trial campaign equals the trial")
{
    ScenarioConfig cfg = small_config();
    cfg.trials = 1;
    const TrialResult t = run_trial(cfg, 0);
    const AggregateResult r = run_campaign(cfg);
    for (const SystemTrial& st : t.systems)
        for (std::size_t k = 0; k < cfg.snr_db.size(); ++k)
        {
            const AggregateRow& row = r.row(st.system, cfg.snr_db[k]);
            CHECK(row.mean_capacity == st.per_snr[k].capacity);
            CHECK(row.mean_gamma_channel == st.gamma_channel);
            CHECK(row.symbol_errors == st.per_snr[k].symbol_errors);
            CHECK(row.bit_errors == st.per_snr[k].bit_errors);
        }
}

TEST_CASE("spectral and direct receivers agree")
{
    for (CsiMode csi : {CsiMode::full, CsiMode::diagonal})
    {
        ScenarioConfig cfg = small_config();
        cfg.csi = csi;
        for (std::size_t trial = 0; trial < 2; ++trial)
        {
            const TrialResult a = run_trial(cfg, trial, {.route = ReceiverRoute::spectral});
            const TrialResult b = run_trial(cfg, trial, {.route = ReceiverRoute::direct});
            REQUIRE(a.systems.size() == b.systems.size());
            for (std::size_t i = 0; i < a.systems.size(); ++i)
            {
                CAPTURE(to_string(a.systems[i].system));
                CHECK(a.systems[i].gamma_channel == doctest::Approx(b.systems[i].gamma_channel).epsilon(1e-12));
                for (std::size_t k = 0; k < cfg.snr_db.size(); ++k)
                {
                    const SnrOutcome& x = a.systems[i].per_snr[k];
                    const SnrOutcome& y = b.systems[i].per_snr[k];
                    CHECK(x.capacity == doctest::Approx(y.capacity).epsilon(1e-9));
                    CHECK(x.gamma_composite == doctest::Approx(y.gamma_composite).epsilon(1e-9));
                    CHECK(x.symbol_errors == y.symbol_errors);
                    CHECK(x.bit_errors == y.bit_errors);
                }
            }
        }
    }
}

TEST_CASE("detail dump matches the trial")
{
    ScenarioConfig cfg = small_config();
    TrialDetail detail;
    const TrialResult t = run_trial(cfg, 1, {}, &detail);
    REQUIRE(detail.systems.size() == t.systems.size());
    for (std::size_t i = 0; i < t.systems.size(); ++i)
    {
        CHECK(detail.systems[i].per_snr.size() == cfg.snr_db.size());
        for (std::size_t k = 0; k < cfg.snr_db.size(); ++k)
            CHECK(detail.systems[i].per_snr[k].sinr.mean() ==
                  doctest::Approx(t.systems[i].per_snr[k].sinr_mean).epsilon(1e-12));
    }
}

TEST_CASE("flat channel at very high SNR makes no errors")
{
    ScenarioConfig cfg = small_config();
    cfg.snr_db = {120.0};
    cfg.trials = 2;
    const AggregateResult r = run_campaign(cfg, {.channel_source = flat_channel});
    for (const AggregateRow& row : r.rows)
    {
        CHECK(row.symbol_errors == 0);
        CHECK(row.ser_ci_lo == 0.0);
    }
}

TEST_CASE("near-zero SNR gives random decisions")
{
    ScenarioConfig cfg = small_config();
    cfg.snr_db = {-40.0};
    cfg.trials = 130; // 130 * 81 > 1e4 symbols
    cfg.systems = {System::ostf, System::otfs};
    const AggregateResult r = run_campaign(cfg);
    for (const AggregateRow& row : r.rows)
    {
        CHECK(row.symbols >= 10000);
        CHECK(std::abs(row.ser - 0.75) < 0.05);
        CHECK(std::abs(row.ber - 0.5) < 0.05);
    }
}

TEST_CASE("identity channel BER follows Q(sqrt(snr))")
{
    ScenarioConfig cfg = small_config();
    cfg.snr_db.assign(20, 10.0); // independent noise per entry
    cfg.systems = {System::ostf, System::eig};
    cfg.trials = 700; // 700 * 20 * 81 * 2 bits per system
    const AggregateResult r = run_campaign(cfg, {.channel_source = flat_channel});
    const double expect = q_function(std::sqrt(10.0));
    for (System s : cfg.systems)
    {
        std::uint64_t bits = 0, errors = 0;
        for (const AggregateRow& row : r.rows)
            if (row.system == s)
            {
                bits += 2 * row.symbols;
                errors += row.bit_errors;
            }
        CHECK(bits >= 100000);
        const double ber = static_cast<double>(errors) / static_cast<double>(bits);
        CAPTURE(ber);
        CAPTURE(expect);
        CHECK(std::abs(ber / expect - 1.0) < 0.15);
    }
}

TEST_CASE("Wilson interval")
{
    const Interval a = wilson_interval(100, 1000);
    const Interval b = wilson_interval(200, 2000);
    CHECK(a.lo < 0.1);
    CHECK(a.hi > 0.1);
    CHECK((a.hi - a.lo) / (b.hi - b.lo) == doctest::Approx(std::sqrt(2.0)).epsilon(0.01));
    // Closed form at k = 0: upper bound z^2 / (n + z^2).
    const double z = 1.959963984540054;
    const Interval zero = wilson_interval(0, 50);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi == doctest::Approx(z * z / (50 + z * z)).epsilon(1e-12));
    CHECK(wilson_interval(50, 50).hi == 1.0);
}

TEST_CASE("numerical failures name the trial and scheme")
{
    ScenarioConfig cfg = small_config();
    cfg.systems = {System::otfs};
    RunOptions opt;
    opt.channel_source = [](std::size_t) {
        ChannelRealization ch;
        ch.paths.push_back({0.0, 0.0, cplx(std::numeric_limits<double>::quiet_NaN(), 0.0)});
        return ch;
    };
    try
    {
        run_trial(cfg, 3, opt);
        FAIL("expected a throw");
    }
    catch (const std::runtime_error& e)
    {
        const std::string msg = e.what();
        CHECK(msg.find("trial 3") != std::string::npos);
        CHECK(msg.find("scheme otfs") != std::string::npos);
    }
    cfg.trials = 2;
    CHECK_THROWS_AS(run_campaign(cfg, opt), std::runtime_error);
}
