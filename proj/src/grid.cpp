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

#include "otfsim/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace otfsim {

namespace {

bool close_rel(double a, double b, double tol = 1e-9)
{
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

std::size_t nearest_odd(double x)
{
    const double below = 2.0 * std::floor((x - 1.0) / 2.0) + 1.0;
    const double above = below + 2.0;
    const double pick = (x - below <= above - x) ? below : above;
    return pick < 1.0 ? 1 : static_cast<std::size_t>(pick);
}

} // namespace

GridDesign grid_from_counts(std::size_t time_slots, std::size_t tones, double bandwidth)
{
    if (time_slots < 1 || tones < 1)
        throw std::invalid_argument("grid needs at least one time slot and one tone");
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw std::invalid_argument("bandwidth must be positive");

    GridDesign g;
    g.time_slots = time_slots;
    g.tones = tones;
    g.dimension = time_slots * tones;
    g.bandwidth = bandwidth;
    g.tone_spacing = bandwidth / static_cast<double>(tones);
    g.pulse_duration = 1.0 / g.tone_spacing;
    g.packet_duration = static_cast<double>(time_slots) * g.pulse_duration;
    g.sample_period = 1.0 / bandwidth;
    g.frequency_step = 1.0 / g.packet_duration;
    return g;
}

GridDesign design_grid(double max_delay, double max_doppler, double bandwidth,
                       std::optional<std::size_t> time_slots_hint)
{
    if (!(max_delay > 0.0) || !(max_doppler > 0.0) || !(bandwidth > 0.0))
        throw std::invalid_argument("design_grid: delay spread, Doppler spread and bandwidth must be positive");
    if (max_delay * 2.0 * max_doppler >= 1.0)
        throw std::invalid_argument("design_grid: channel is overspread (tau_max * 2 nu_max >= 1)");
    if (!time_slots_hint)
        throw std::invalid_argument("design_grid: number of time slots must be given");
    if (*time_slots_hint < 1)
        throw std::invalid_argument("design_grid: need at least one time slot");

    const double ideal_pulse = std::sqrt(max_delay / (2.0 * max_doppler));
    const double ideal_spacing = 1.0 / ideal_pulse;
    const std::size_t tones = nearest_odd(bandwidth / ideal_spacing);
    if (tones < 3)
        throw std::invalid_argument("design_grid: bandwidth too small for the channel spreads (fewer than 3 tones)");

    GridDesign g = grid_from_counts(*time_slots_hint, tones, bandwidth);
    validate(g, true);
    return g;
}

GridDesign ofdm_grid(const GridDesign& grid)
{
    GridDesign g = grid_from_counts(1, grid.dimension, grid.bandwidth);
    // Keep T exactly as stored on the source grid.
    g.packet_duration = grid.packet_duration;
    g.pulse_duration = grid.packet_duration;
    g.frequency_step = grid.frequency_step;
    return g;
}

void validate(const GridDesign& g, bool require_odd_tones)
{
    std::string problems;
    auto fail = [&](const char* what) {
        if (!problems.empty())
            problems += "; ";
        problems += what;
    };
    if (g.time_slots < 1)
        fail("time_slots < 1");
    if (g.tones < 1)
        fail("tones < 1");
    if (g.dimension != g.time_slots * g.tones)
        fail("dimension != time_slots * tones");
    if (require_odd_tones && g.tones % 2 == 0)
        fail("tone count must be odd");
    if (!close_rel(g.pulse_duration * g.tone_spacing, 1.0))
        fail("pulse_duration * tone_spacing != 1");
    if (!close_rel(g.packet_duration, static_cast<double>(g.time_slots) * g.pulse_duration))
        fail("packet_duration != time_slots * pulse_duration");
    if (!close_rel(g.bandwidth, static_cast<double>(g.tones) * g.tone_spacing))
        fail("bandwidth != tones * tone_spacing");
    if (!close_rel(g.sample_period * g.bandwidth, 1.0))
        fail("sample_period != 1/bandwidth");
    if (!close_rel(g.frequency_step * g.packet_duration, 1.0))
        fail("frequency_step != 1/packet_duration");
    if (!problems.empty())
        throw std::invalid_argument("invalid grid: " + problems);
}

} // namespace otfsim
