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

#include <cstdio>
#include <fstream>
#include <sstream>

#include "otfsim/config.hpp"
#include "otfsim/report.hpp"

using namespace otfsim;

namespace {

bool same(const ScenarioConfig& a, const ScenarioConfig& b)
{
    return a.name == b.name && a.carrier_frequency == b.carrier_frequency && a.bandwidth == b.bandwidth &&
           a.max_delay == b.max_delay && a.max_doppler == b.max_doppler && a.num_paths == b.num_paths &&
           a.time_slots == b.time_slots && a.snr_db == b.snr_db && a.trials == b.trials && a.systems == b.systems &&
           a.csi == b.csi && a.base_seed == b.base_seed;
}

std::vector<std::string> lines_of(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("built-in scenarios")
{
    const ScenarioConfig m = builtin_scenario("moderate");
    CHECK(m.bandwidth == 15e6);
    CHECK(m.max_delay == 300e-9);
    CHECK(m.max_doppler == 1850.0);
    CHECK(m.num_paths == 30);
    CHECK(m.time_slots == 9);
    CHECK(m.carrier_frequency == 4e9);
    CHECK(scenario_grid(m).dimension == 1215);

    const ScenarioConfig e = builtin_scenario("extreme");
    CHECK(e.max_delay == 700e-9);
    CHECK(e.max_doppler == 9260.0);
    CHECK(scenario_grid(e).dimension == 1209);

    const GridDesign r = scenario_grid(builtin_scenario("reduced"));
    CHECK(r.time_slots == 5);
    CHECK(r.tones == 27);

    try
    {
        builtin_scenario("nope");
        FAIL("expected a throw");
    }
    catch (const ConfigError& err)
    {
        CHECK(err.kind() == ConfigError::Kind::unknown_scenario);
    }
}

TEST_CASE("overrides apply on top of the base")
{
    const ScenarioConfig base = builtin_scenario("moderate");
    const ScenarioConfig c = parse_config("[simulation]\ntrials = 5\n", base);
    CHECK(c.trials == 5);
    CHECK(c.bandwidth == base.bandwidth);
    CHECK(c.snr_db == base.snr_db);

    const ScenarioConfig d = parse_config(R"(
# comment line
[scenario]
name = custom   # trailing comment
max_delay = 700e-9
max_doppler = 9260
time_slots = 13
[simulation]
snr_db = 15, 20
schemes = ostf, ostf-u
csi = diag
seed = 99
)",
                                          base);
    CHECK(d.name == "custom");
    CHECK(d.snr_db == std::vector<double>{15.0, 20.0});
    CHECK(d.systems == std::vector<System>{System::ostf, System::ostf_u});
    CHECK(d.csi == CsiMode::diagonal);
    CHECK(d.base_seed == 99);
    CHECK(scenario_grid(d).dimension == 1209);
}

TEST_CASE("every problem is reported at once")
{
    const ScenarioConfig base = builtin_scenario("moderate");
    try
    {
        parse_config("[simulation]\ntrials = many\ncsi = partial\ncolour = blue\n[scenario]\nbandwidth = -3\n", base);
        FAIL("expected a throw");
    }
    catch (const ConfigError& e)
    {
        CHECK(e.kind() == ConfigError::Kind::invalid);
        CHECK(e.problems().size() >= 4);
        const std::string msg = e.what();
        CHECK(msg.find("trials") != std::string::npos);
        CHECK(msg.find("csi") != std::string::npos);
        CHECK(msg.find("colour") != std::string::npos);
        CHECK(msg.find("bandwidth") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("[simulation]\nschemes = ostf, foo\n", base), ConfigError);
    CHECK_THROWS_AS(parse_config("trials = 3\n", base), ConfigError);
    CHECK_THROWS_AS(parse_config("[scenario]\ntime_slots = 0\n", base), ConfigError);
}

TEST_CASE("scheme and SNR lists")
{
    CHECK(parse_systems("otfs,eig") == std::vector<System>{System::otfs, System::eig});
    try
    {
        parse_systems("ostf,foo,bar");
        FAIL("expected a throw");
    }
    catch (const ConfigError& e)
    {
        CHECK(e.kind() == ConfigError::Kind::unknown_scheme);
        const std::string msg = e.what();
        CHECK(msg.find("foo") != std::string::npos);
        CHECK(msg.find("bar") != std::string::npos);
    }
    CHECK(parse_snr_list("0, 7.5,-3") == std::vector<double>{0.0, 7.5, -3.0});
    CHECK_THROWS_AS(parse_snr_list("1,x"), ConfigError);
}

TEST_CASE("config text round trip")
{
    for (const auto& name : builtin_scenario_names())
    {
        ScenarioConfig c = builtin_scenario(name);
        c.snr_db = {0.1, 1.0 / 3.0};
        c.base_seed = 18446744073709551615ull;
        const ScenarioConfig back = parse_config(to_config_text(c), builtin_scenario("moderate"));
        CHECK(same(c, back));
    }
}

TEST_CASE("config files")
{
    const std::string path = "otfsim_test_config.ini";
    {
        std::ofstream f(path);
        f << "[scenario]\nbase = extreme\n[simulation]\ntrials = 3\n";
    }
    const ScenarioConfig c = load_config(path);
    CHECK(c.name == "extreme");
    CHECK(c.trials == 3);
    std::remove(path.c_str());
    try
    {
        load_config("/nonexistent/dir/cfg.ini");
        FAIL("expected a throw");
    }
    catch (const ConfigError& e)
    {
        CHECK(e.kind() == ConfigError::Kind::unreadable);
    }
}

TEST_CASE("CSV layout")
{
    ScenarioConfig cfg = builtin_scenario("reduced");
    cfg.trials = 2;
    cfg.snr_db = {20.0, 10.0};
    cfg.systems = {System::otfs, System::eig, System::ostf};
    const AggregateResult r = run_campaign(cfg);
    std::ostringstream os;
    write_csv(os, r);
    const auto lines = lines_of(os.str());
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == kCsvHeader);
    // Scheme order alphabetical, SNR ascending.
    CHECK(lines[1].rfind("reduced,eig,full,10,2,", 0) == 0);
    CHECK(lines[2].rfind("reduced,eig,full,20,2,", 0) == 0);
    CHECK(lines[3].rfind("reduced,ostf,full,10,", 0) == 0);
    CHECK(lines[6].rfind("reduced,otfs,full,20,", 0) == 0);
    for (std::size_t i = 1; i < lines.size(); ++i)
    {
        std::size_t commas = 0;
        for (char ch : lines[i])
            commas += ch == ',';
        CHECK(commas == 12);
        CHECK(lines[i].substr(lines[i].rfind(',') + 1) == "1");
    }

    std::ostringstream meta;
    write_metadata(meta, cfg, r.grid);
    CHECK(meta.str().rfind(std::string("# ") + std::string(kVersion), 0) == 0);
    // The metadata is itself a loadable config.
    CHECK(same(parse_config(meta.str(), builtin_scenario("moderate")), cfg));
}

TEST_CASE("trial dumps")
{
    ScenarioConfig cfg = builtin_scenario("reduced");
    cfg.snr_db = {20.0};
    cfg.systems = {System::ostf, System::otfs};
    TrialDetail detail;
    run_trial(cfg, 0, {}, &detail);
    std::ostringstream hc, sinr;
    write_trial_dump(hc, cfg, detail, "Hc");
    write_trial_dump(sinr, cfg, detail, "sinr");
    const auto a = lines_of(hc.str()), b = lines_of(sinr.str());
    CHECK(a.size() == 136);
    CHECK(a[0] == "n,ostf_abs_H,ostf_Hc_20dB,otfs_abs_H,otfs_Hc_20dB");
    CHECK(b[0] == "n,ostf_sinr_20dB,otfs_sinr_20dB");
    std::ostringstream bad;
    CHECK_THROWS_AS(write_trial_dump(bad, cfg, detail, "X"), std::invalid_argument);
}
