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

#include <cstddef>
#include <optional>

namespace otfsim {

/// Time-frequency tiling of one signaling packet.
///
/// A packet of duration T and two-sided bandwidth W is split into
/// `time_slots` pulses of length `pulse_duration`, each carrying `tones`
/// subcarriers spaced `tone_spacing` apart, with pulse_duration *
/// tone_spacing = 1. The critically sampled model has `dimension` = T*W
/// samples in time (spaced `sample_period` = 1/W) and in frequency (spaced
/// `frequency_step` = 1/T).
struct GridDesign
{
    double pulse_duration = 0.0; // s
    double tone_spacing = 0.0;   // Hz
    std::size_t time_slots = 0;
    std::size_t tones = 0;
    std::size_t dimension = 0;
    double bandwidth = 0.0;       // Hz, two-sided
    double packet_duration = 0.0; // s
    double sample_period = 0.0;   // s
    double frequency_step = 0.0;  // Hz
};

/// Grid matched to a channel's spreads: pulse_duration / tone_spacing =
/// max_delay / (2 max_doppler), with the tone count snapped to the nearest
/// odd integer that fills `bandwidth`. The packet length (time slots) must
/// be supplied.
///
/// Throws std::invalid_argument for nonpositive inputs, an overspread
/// channel (max_delay * 2 max_doppler >= 1), a missing slot count, or a
/// grid with fewer than 3 tones.
GridDesign design_grid(double max_delay, double max_doppler, double bandwidth,
                       std::optional<std::size_t> time_slots_hint);

/// Single-slot grid with the same dimension, bandwidth and duration; the
/// OFDM special case (time_slots = 1, tones = dimension).
GridDesign ofdm_grid(const GridDesign& grid);

/// Grid from explicit counts (used for small test grids and OFDM). No
/// parity requirement on `tones`.
GridDesign grid_from_counts(std::size_t time_slots, std::size_t tones, double bandwidth);

/// Throws std::invalid_argument if any structural invariant is violated.
void validate(const GridDesign& grid, bool require_odd_tones = false);

} // namespace otfsim
