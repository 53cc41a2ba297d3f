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

// Command-line front end: runs a Monte Carlo campaign and writes the
// aggregate CSV plus a `.meta` sidecar, or dumps diagnostic matrices for
// one trial.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otfsim/channel.hpp"
#include "otfsim/config.hpp"
#include "otfsim/modulation.hpp"
#include "otfsim/montecarlo.hpp"
#include "otfsim/report.hpp"

namespace {

enum ExitCode : int
{
    kOk = 0,
    kUsage = 1,
    kUnknownScheme = 2,
    kUnknownScenario = 3,
    kUnreadableConfig = 4,
    kInvalidConfig = 5,
    kUnwritableOutput = 6,
    kNumericalFailure = 7,
};

int exit_code_for(const otfsim::ConfigError& e)
{
    switch (e.kind())
    {
    case otfsim::ConfigError::Kind::unknown_scheme: return kUnknownScheme;
    case otfsim::ConfigError::Kind::unknown_scenario: return kUnknownScenario;
    case otfsim::ConfigError::Kind::unreadable: return kUnreadableConfig;
    case otfsim::ConfigError::Kind::invalid: return kInvalidConfig;
    }
    return kInvalidConfig;
}

struct OutputError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw OutputError("cannot write output file '" + path + "'");
    return f;
}

std::string with_suffix(const std::string& out, const std::string& suffix)
{
    std::filesystem::path p(out);
    const std::string stem = (p.parent_path() / p.stem()).string();
    return stem + suffix;
}

std::size_t default_threads()
{
    if (const char* env = std::getenv("OTFSIM_THREADS"))
    {
        try
        {
            const long v = std::stol(env);
            if (v >= 0)
                return static_cast<std::size_t>(v);
        }
        catch (const std::exception&)
        {
        }
        std::cerr << "otfsim: ignoring invalid OTFSIM_THREADS='" << env << "'\n";
    }
    return 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo comparison of OSTF, OTFS, OFDM, OSTF-U and EIG signaling "
                 "over doubly dispersive channels"};

    std::string scenario = "moderate";
    std::string config_path;
    std::string schemes;
    std::string csi;
    std::vector<double> snr;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::size_t threads = default_threads();
    std::string out = "otfsim_results.csv";
    std::string dump;
    std::size_t dump_trial = 0;
    bool quiet = false;

    app.add_option("--scenario", scenario, "Built-in scenario: moderate, extreme, reduced")->capture_default_str();
    app.add_option("--config", config_path, "Scenario file applied over the built-in scenario");
    app.add_option("--schemes", schemes, "Comma-separated schemes: ostf,otfs,ofdm,ostf-u,eig");
    app.add_option("--csi", csi, "Receiver CSI: full or diag")->check(CLI::IsMember({"full", "diag"}));
    app.add_option("--snr", snr, "SNR points in dB (comma-separated)")->delimiter(',');
    app.add_option("--trials", trials, "Channel realizations");
    app.add_option("--seed", seed, "Base seed");
    app.add_option("--threads", threads, "Worker threads (0 = all cores; default from OTFSIM_THREADS)")
        ->capture_default_str();
    app.add_option("--out", out, "Output CSV path; metadata goes to <out>.meta")->capture_default_str();
    app.add_option("--dump", dump, "Dump one trial instead of running a campaign: H, U, Hc or sinr")
        ->check(CLI::IsMember({"H", "U", "Hc", "sinr"}));
    app.add_option("--trial", dump_trial, "Trial index for --dump")->capture_default_str();
    app.add_flag("--quiet", quiet, "No progress output");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    otfsim::ScenarioConfig cfg;
    try
    {
        cfg = config_path.empty() ? otfsim::builtin_scenario(scenario) : otfsim::load_config(config_path, scenario);
        if (!schemes.empty())
            cfg.systems = otfsim::parse_systems(schemes);
        if (!csi.empty())
            cfg.csi = csi == "diag" ? otfsim::CsiMode::diagonal : otfsim::CsiMode::full;
        if (!snr.empty())
            cfg.snr_db = snr;
        if (trials)
            cfg.trials = *trials;
        if (seed)
            cfg.base_seed = *seed;
        if (auto problems = otfsim::check(cfg); !problems.empty())
            throw otfsim::ConfigError(otfsim::ConfigError::Kind::invalid, std::move(problems));
    }
    catch (const otfsim::ConfigError& e)
    {
        for (const auto& p : e.problems())
            std::cerr << "otfsim: " << p << '\n';
        return exit_code_for(e);
    }

    try
    {
        const otfsim::GridDesign grid = otfsim::scenario_grid(cfg);
        std::ofstream meta = open_output(out + ".meta");

        if (!dump.empty())
        {
            if (dump == "H")
            {
                const auto ch = otfsim::trial_channel(cfg, dump_trial);
                const auto sampled = otfsim::sample_channel(ch, grid);
                auto f1 = open_output(with_suffix(out, "_H.csv"));
                otfsim::write_magnitude_csv(f1, sampled.response, "n/m");
                auto f2 = open_output(with_suffix(out, "_spreading.csv"));
                otfsim::write_magnitude_csv(f2, otfsim::spreading_function(sampled), "k/l");
            }
            else if (dump == "U")
            {
                auto f1 = open_output(with_suffix(out, "_U_ostf.csv"));
                otfsim::write_magnitude_csv(f1, otfsim::ostf_matrix(grid).matrix, "k/col");
                auto f2 = open_output(with_suffix(out, "_U_otfs.csv"));
                otfsim::write_magnitude_csv(f2, otfsim::otfs_matrix(grid).matrix, "k/col");
            }
            else
            {
                otfsim::TrialDetail detail;
                otfsim::run_trial(cfg, dump_trial, {}, &detail);
                auto f = open_output(with_suffix(out, "_" + dump + ".csv"));
                otfsim::write_trial_dump(f, cfg, detail, dump);
            }
            otfsim::write_metadata(meta, cfg, grid);
            meta << "# dump = " << dump << ", trial = " << dump_trial << '\n';
            return kOk;
        }

        std::ofstream csv = open_output(out);
        otfsim::RunOptions opts;
        opts.threads = threads;
        if (!quiet)
        {
            std::cerr << "otfsim: " << cfg.name << ", N = " << grid.dimension << " (" << grid.time_slots << " x "
                      << grid.tones << "), " << cfg.trials << " trials, " << cfg.snr_db.size() << " SNR points\n";
            opts.progress = [](std::size_t done, std::size_t total) {
                std::cerr << "otfsim: trial " << done << '/' << total << " done\n";
            };
        }
        const otfsim::AggregateResult result = otfsim::run_campaign(cfg, opts);
        otfsim::write_csv(csv, result);
        otfsim::write_metadata(meta, cfg, grid);
        if (!csv || !meta)
            throw OutputError("write failed for '" + out + "'");
    }
    catch (const OutputError& e)
    {
        std::cerr << "otfsim: " << e.what() << '\n';
        return kUnwritableOutput;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "otfsim: invalid configuration: " << e.what() << '\n';
        return kInvalidConfig;
    }
    catch (const std::exception& e)
    {
        std::cerr << "otfsim: numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kOk;
}
