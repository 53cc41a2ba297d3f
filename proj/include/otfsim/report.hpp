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

#include <iosfwd>
#include <string_view>

#include "otfsim/montecarlo.hpp"

namespace otfsim {

inline constexpr std::string_view kVersion = "otfsim 0.1.0";

inline constexpr std::string_view kCsvHeader =
    "scenario,scheme,csi_mode,snr_db,trials,mean_capacity_bps_hz,mean_gamma_H_db,mean_gamma_Hc_db,"
    "ser,ser_ci_lo,ser_ci_hi,ber,seed";

/// One row per (scheme, SNR) in AggregateResult order; reals with 9
/// significant digits, diagonality in dB.
void write_csv(std::ostream& os, const AggregateResult& result);

/// Resolved configuration (loadable with --config), grid and seed
/// derivation, prefixed by the version string.
void write_metadata(std::ostream& os, const ScenarioConfig& cfg, const GridDesign& grid);

/// Per-dimension dump of one trial. `what` is "Hc" (|diag H|, diag H_c)
/// or "sinr" (per-dimension SINR); one column per (scheme, SNR).
void write_trial_dump(std::ostream& os, const ScenarioConfig& cfg, const TrialDetail& detail, std::string_view what);

} // namespace otfsim
