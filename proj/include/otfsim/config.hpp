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

// Scenario files: flat `key = value` lines grouped under [scenario] and
// [simulation] headers, `#` starts a comment. A file is applied on top of
// a built-in scenario chosen by `base` (default "moderate").
//
//   [scenario]
//   base = extreme
//   bandwidth = 15e6        # Hz
//   max_delay = 700e-9      # s
//   max_doppler = 9260      # Hz
//   paths = 30
//   time_slots = 13
//   carrier_frequency = 4e9 # Hz, recorded only
//   name = my-run
//
//   [simulation]
//   snr_db = 15, 20, 25, 30
//   trials = 100
//   schemes = ostf, otfs, ofdm, ostf-u, eig
//   csi = full              # full | diag
//   seed = 1

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "otfsim/montecarlo.hpp"

namespace otfsim {

class ConfigError : public std::runtime_error
{
public:
    enum class Kind { unreadable, invalid, unknown_scenario, unknown_scheme };

    ConfigError(Kind kind, std::vector<std::string> problems);

    Kind kind() const { return kind_; }
    const std::vector<std::string>& problems() const { return problems_; }

private:
    Kind kind_;
    std::vector<std::string> problems_;
};

std::vector<std::string> builtin_scenario_names();

/// Built-in scenario by name; throws ConfigError(unknown_scenario).
ScenarioConfig builtin_scenario(std::string_view name);

/// Comma-separated scheme names; throws ConfigError(unknown_scheme)
/// listing every unrecognized name.
std::vector<System> parse_systems(std::string_view list);

/// Comma-separated SNR values in dB.
std::vector<double> parse_snr_list(std::string_view list);

/// Applies `text` over `base`. All problems (syntax, unknown keys, bad
/// values, violated invariants) are collected before throwing.
ScenarioConfig parse_config(std::string_view text, const ScenarioConfig& base);

/// Reads `path` and applies it over the built-in scenario named by its
/// `base` key (or `default_base`).
ScenarioConfig load_config(const std::string& path, std::string_view default_base = "moderate");

/// Text form accepted by parse_config that reproduces `cfg` exactly.
std::string to_config_text(const ScenarioConfig& cfg);

} // namespace otfsim
