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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "otfsim/channel.hpp"
#include "otfsim/grid.hpp"
#include "otfsim/receiver.hpp"
#include "otfsim/types.hpp"

namespace otfsim {

/// Signaling systems compared in a campaign. Declaration order is the
/// alphabetical order of the names, which is also the report order.
enum class System { eig, ofdm, ostf, ostf_u, otfs };

std::string_view to_string(System system);
std::optional<System> parse_system(std::string_view name);

struct ScenarioConfig
{
    std::string name;
    double carrier_frequency = 4e9; // Hz, recorded only
    double bandwidth = 0.0;         // Hz
    double max_delay = 0.0;         // s
    double max_doppler = 0.0;       // Hz
    std::size_t num_paths = 30;
    std::size_t time_slots = 0;
    std::vector<double> snr_db;
    std::size_t trials = 1;
    std::vector<System> systems;
    CsiMode csi = CsiMode::full;
    std::uint64_t base_seed = 1;
};

/// Every violated invariant, empty when the config is usable.
std::vector<std::string> check(const ScenarioConfig& cfg);

/// Grid for the scenario (throws std::invalid_argument like design_grid).
GridDesign scenario_grid(const ScenarioConfig& cfg);

enum class SeedStream : std::uint64_t { channel = 1, precoder = 2, symbols = 3, noise = 4 };

/// Counter-based seed: a function of (base, trial, stream, sub) only, so
/// adding trials or reordering work never changes an existing trial.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, SeedStream stream, std::uint64_t sub = 0);

/// Channel realization used by trial `trial_index`.
ChannelRealization trial_channel(const ScenarioConfig& cfg, std::size_t trial_index);

struct SnrOutcome
{
    double capacity = 0.0;
    double gamma_composite = 0.0;
    double sinr_mean = 0.0;
    double sinr_min = 0.0;
    double sinr_max = 0.0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t symbols = 0;
};

struct SystemTrial
{
    System system = System::ostf;
    double gamma_channel = 0.0;
    std::vector<SnrOutcome> per_snr; ///< in cfg.snr_db order
};

struct TrialResult
{
    std::size_t trial = 0;
    std::vector<SystemTrial> systems; ///< sorted by System
};

/// Per-dimension quantities from one trial, for diagnostic dumps.
struct TrialDetail
{
    struct SnrPoint
    {
        RVector composite_diagonal;
        RVector sinr;
    };
    struct PerSystem
    {
        System system = System::ostf;
        CVector channel_diagonal;
        std::vector<SnrPoint> per_snr;
    };
    std::vector<PerSystem> systems;
};

enum class ReceiverRoute
{
    spectral, ///< one eigendecomposition per trial, shared by all systems and SNRs
    direct,   ///< Cholesky-based filter per (system, SNR); reference path
};

/// Called once per (system, SNR point) with the transmitted symbols and
/// the noise realization.
using TrialObserver = std::function<void(System, std::size_t snr_index, const CVector& symbols, const CVector& noise)>;

struct RunOptions
{
    std::size_t threads = 1; ///< 0 = hardware concurrency
    ReceiverRoute route = ReceiverRoute::spectral;
    TrialObserver observer; ///< only honored with threads == 1
    std::function<void(std::size_t done, std::size_t total)> progress;
    /// Replaces trial_channel() when set (fixed channels in tests).
    std::function<ChannelRealization(std::size_t trial)> channel_source;
};

TrialResult run_trial(const ScenarioConfig& cfg, std::size_t trial_index, const RunOptions& options = {},
                      TrialDetail* detail = nullptr);

struct AggregateRow
{
    System system = System::ostf;
    double snr_db = 0.0;
    std::size_t trials = 0;
    double mean_capacity = 0.0;
    double mean_gamma_channel = 0.0;   ///< linear
    double mean_gamma_composite = 0.0; ///< linear
    double mean_sinr = 0.0;
    std::uint64_t symbols = 0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t bit_errors = 0;
    double ser = 0.0;
    double ser_ci_lo = 0.0;
    double ser_ci_hi = 0.0;
    double ber = 0.0;
};

struct AggregateResult
{
    ScenarioConfig config;
    GridDesign grid;
    std::vector<AggregateRow> rows; ///< by System, then ascending SNR

    const AggregateRow& row(System system, double snr_db) const;
};

struct Interval
{
    double lo;
    double hi;
};

/// Wilson score interval for k successes in n trials (95% by default).
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

/// Order-independent reduction of per-trial results (trial order fixed by
/// the `trial` field, sums are compensated).
AggregateResult aggregate(const ScenarioConfig& cfg, std::span<const TrialResult> trials);

/// Runs cfg.trials trials on options.threads workers. The result does not
/// depend on the thread count.
AggregateResult run_campaign(const ScenarioConfig& cfg, const RunOptions& options = {});

} // namespace otfsim
