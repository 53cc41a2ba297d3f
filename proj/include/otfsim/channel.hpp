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
#include <iosfwd>
#include <string_view>
#include <vector>

#include "otfsim/grid.hpp"
#include "otfsim/types.hpp"

namespace otfsim {

/// One propagation path: delay in [0, max_delay], Doppler shift in
/// [-max_doppler, max_doppler], complex amplitude.
struct Path
{
    double delay = 0.0;   // s
    double doppler = 0.0; // Hz
    cplx gain{0.0, 0.0};
};

struct ChannelRealization
{
    std::vector<Path> paths;
    double max_delay = 0.0;
    double max_doppler = 0.0;
    /// Per-path variance of `gain`, normalized to sum to one.
    std::vector<double> path_powers;
};

/// Critically sampled channel.
///
/// response(n, m) = H(n dt, m df), the time-varying frequency response.
/// twisted(n, m) = response(n, m) e^{j2pi nm/N} / sqrt(N), so that the
/// received samples are r = twisted * U_N^H * s + w. The 1/sqrt(N) makes a
/// flat unit channel map to the identity.
/// time_domain = twisted * U_N^H, the operator acting on time samples s.
struct SampledChannel
{
    CMatrix response;
    CMatrix twisted;
    CMatrix time_domain;
};

/// Draws `num_paths` paths with uniform delays and Dopplers and circular
/// Gaussian amplitudes of variance exp(-l/num_paths), l = 1..num_paths,
/// rescaled to unit total power. Deterministic in `seed`.
ChannelRealization draw_channel(double max_delay, double max_doppler, std::size_t num_paths,
                                std::uint64_t seed);

SampledChannel sample_channel(const ChannelRealization& channel, const GridDesign& grid);

/// twisted * U_N^H evaluated in closed form (Dirichlet kernel per path),
/// O(N^2 * paths) instead of a dense N^3 product.
CMatrix time_domain_operator(const ChannelRealization& channel, const GridDesign& grid);

/// U_N^H * twisted, i.e. the channel seen between OFDM subcarriers,
/// evaluated in closed form.
CMatrix frequency_domain_operator(const ChannelRealization& channel, const GridDesign& grid);

/// 2-D unitary DFT of `response`: rows are Doppler bins (from the time
/// axis), columns are delay bins (from the frequency axis).
CMatrix spreading_function(const SampledChannel& sampled);

/// (1/N) sum_{m<N} e^{j2pi m x / N}
cplx dirichlet(double x, std::size_t n);

/// Writes |M| as CSV: header `<corner>,0,1,...`, then one row per matrix
/// row led by its index.
void write_magnitude_csv(std::ostream& os, const CMatrix& m, std::string_view corner = "n/m");

} // namespace otfsim
