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

#include "otfsim/channel.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>

#include "otfsim/kernels.hpp"
#include "otfsim/modulation.hpp"

namespace otfsim {

namespace {

// out(i, j) = sum_l phases(i, l) * kernels((i - j) mod N, l), where the
// kernel columns are stored twice over (length 2N) so each column of the
// output reads a contiguous window.
CMatrix shift_synthesis(const CMatrix& phases, const CMatrix& doubled_kernels)
{
    const Eigen::Index n = phases.rows();
    CMatrix out = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
    {
        std::span<cplx> col(out.col(j).data(), static_cast<std::size_t>(n));
        for (Eigen::Index l = 0; l < phases.cols(); ++l)
        {
            std::span<const cplx> ph(phases.col(l).data(), static_cast<std::size_t>(n));
            std::span<const cplx> ker(doubled_kernels.col(l).data() + (n - j), static_cast<std::size_t>(n));
            kernels::multiply_accumulate(col, ph, ker);
        }
    }
    return out;
}

// Delay of each path in samples and Doppler in frequency bins.
struct PathBins
{
    double delay;
    double doppler;
};

PathBins bins(const Path& p, const GridDesign& g)
{
    const double n = static_cast<double>(g.dimension);
    return {p.delay * g.frequency_step * n, p.doppler * g.sample_period * n};
}

} // namespace

cplx dirichlet(double x, std::size_t n)
{
    const double nd = static_cast<double>(n);
    const double r = x - nd * std::round(x / nd);
    if (std::abs(r) < 1e-13)
        return {1.0, 0.0};
    const double pi = std::numbers::pi;
    const double mag = std::sin(pi * r) / (nd * std::sin(pi * r / nd));
    return std::polar(mag, pi * r * (nd - 1.0) / nd);
}

ChannelRealization draw_channel(double max_delay, double max_doppler, std::size_t num_paths,
                                std::uint64_t seed)
{
    if (num_paths < 1)
        throw std::invalid_argument("draw_channel: need at least one path");
    if (!(max_delay > 0.0) || !(max_doppler > 0.0))
        throw std::invalid_argument("draw_channel: spreads must be positive");

    ChannelRealization ch;
    ch.max_delay = max_delay;
    ch.max_doppler = max_doppler;
    ch.path_powers.resize(num_paths);

    const double np = static_cast<double>(num_paths);
    double total = 0.0;
    for (std::size_t l = 0; l < num_paths; ++l)
    {
        ch.path_powers[l] = std::exp(-static_cast<double>(l + 1) / np);
        total += ch.path_powers[l];
    }
    for (double& p : ch.path_powers)
        p /= total;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> delay(0.0, max_delay);
    std::uniform_real_distribution<double> doppler(-max_doppler, max_doppler);
    std::normal_distribution<double> gauss(0.0, 1.0);

    ch.paths.reserve(num_paths);
    for (std::size_t l = 0; l < num_paths; ++l)
    {
        Path p;
        p.delay = delay(rng);
        p.doppler = doppler(rng);
        const double sd = std::sqrt(ch.path_powers[l] / 2.0);
        const double re = gauss(rng);
        const double im = gauss(rng);
        p.gain = {sd * re, sd * im};
        ch.paths.push_back(p);
    }
    return ch;
}

SampledChannel sample_channel(const ChannelRealization& channel, const GridDesign& grid)
{
    const auto n = static_cast<Eigen::Index>(grid.dimension);
    const auto np = static_cast<Eigen::Index>(channel.paths.size());

    // H = A diag(gain) B^T with A(n,l) = e^{j2pi nu_l n dt}, B(m,l) = e^{-j2pi tau_l m df}
    CMatrix a(n, np), b(n, np);
    for (Eigen::Index l = 0; l < np; ++l)
    {
        const Path& p = channel.paths[static_cast<std::size_t>(l)];
        for (Eigen::Index i = 0; i < n; ++i)
        {
            a(i, l) = p.gain * unit_phasor(p.doppler * static_cast<double>(i) * grid.sample_period);
            b(i, l) = unit_phasor(-p.delay * static_cast<double>(i) * grid.frequency_step);
        }
    }

    SampledChannel sc;
    sc.response.noalias() = a * b.transpose();

    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<cplx> roots(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k)
        roots[static_cast<std::size_t>(k)] = scale * unit_phasor(static_cast<double>(k) / static_cast<double>(n));

    sc.twisted.resize(n, n);
    for (Eigen::Index m = 0; m < n; ++m)
        for (Eigen::Index i = 0; i < n; ++i)
            sc.twisted(i, m) = sc.response(i, m) * roots[static_cast<std::size_t>((i * m) % n)];

    sc.time_domain = time_domain_operator(channel, grid);
    return sc;
}

CMatrix time_domain_operator(const ChannelRealization& channel, const GridDesign& grid)
{
    const auto n = static_cast<Eigen::Index>(grid.dimension);
    const auto np = static_cast<Eigen::Index>(channel.paths.size());
    CMatrix phases(n, np), kernels(2 * n, np);
    for (Eigen::Index l = 0; l < np; ++l)
    {
        const Path& p = channel.paths[static_cast<std::size_t>(l)];
        const PathBins pb = bins(p, grid);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            phases(i, l) = p.gain * unit_phasor(p.doppler * static_cast<double>(i) * grid.sample_period);
            const cplx d = dirichlet(static_cast<double>(i) - pb.delay, grid.dimension);
            kernels(i, l) = d;
            kernels(i + n, l) = d;
        }
    }
    return shift_synthesis(phases, kernels);
}

CMatrix frequency_domain_operator(const ChannelRealization& channel, const GridDesign& grid)
{
    const auto n = static_cast<Eigen::Index>(grid.dimension);
    const auto np = static_cast<Eigen::Index>(channel.paths.size());
    CMatrix phases(n, np), kernels(2 * n, np);
    for (Eigen::Index l = 0; l < np; ++l)
    {
        const Path& p = channel.paths[static_cast<std::size_t>(l)];
        const PathBins pb = bins(p, grid);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            phases(i, l) = p.gain * unit_phasor(-p.delay * static_cast<double>(i) * grid.frequency_step);
            const cplx d = dirichlet(static_cast<double>(i) + pb.doppler, grid.dimension);
            kernels(i, l) = d;
            kernels(i + n, l) = d;
        }
    }
    // synthesis gives out(m, k) = F(k, m)
    return shift_synthesis(phases, kernels).transpose();
}

CMatrix spreading_function(const SampledChannel& sampled)
{
    const CMatrix u = dft_matrix(static_cast<std::size_t>(sampled.response.rows()));
    CMatrix tmp = u.adjoint() * sampled.response;
    return tmp * u;
}

void write_magnitude_csv(std::ostream& os, const CMatrix& m, std::string_view corner)
{
    char buf[32];
    os << corner;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        os << ',' << j;
    os << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        os << i;
        for (Eigen::Index j = 0; j < m.cols(); ++j)
        {
            std::snprintf(buf, sizeof buf, "%.9g", std::abs(m(i, j)));
            os << ',' << buf;
        }
        os << '\n';
    }
}

} // namespace otfsim
