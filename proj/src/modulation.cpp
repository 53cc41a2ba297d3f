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

#include "otfsim/modulation.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace otfsim {

namespace {

void require_dimension(const CMatrix& m, std::size_t n, const char* who)
{
    if (static_cast<std::size_t>(m.rows()) != n)
        throw std::invalid_argument(std::string(who) + ": row count does not match the grid dimension");
}

} // namespace

std::string_view to_string(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::ostf: return "ostf";
    case Scheme::otfs: return "otfs";
    case Scheme::ofdm: return "ofdm";
    case Scheme::ostf_u: return "ostf-u";
    }
    return "?";
}

long physical_tone(std::size_t tone, std::size_t tones)
{
    const std::size_t half = (tones - 1) / 2;
    return tone <= half ? static_cast<long>(tone) : static_cast<long>(tone) - static_cast<long>(tones);
}

CMatrix dft_matrix(std::size_t n)
{
    if (n < 1)
        throw std::invalid_argument("dft_matrix: n must be positive");
    const auto ni = static_cast<Eigen::Index>(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    CMatrix u(ni, ni);
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t a = 0; a < n; ++a)
            u(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                scale * unit_phasor(static_cast<double>((a * b) % n) / static_cast<double>(n));
    return u;
}

ModulationBasis ostf_matrix(const GridDesign& grid)
{
    validate(grid);
    const std::size_t nt = grid.time_slots, nf = grid.tones, n = grid.dimension;
    const double amp = 1.0 / std::sqrt(static_cast<double>(nf));

    ModulationBasis basis{Scheme::ostf, CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), grid};
    for (std::size_t slot = 0; slot < nt; ++slot)
    {
        for (std::size_t tone = 0; tone < nf; ++tone)
        {
            const long m = physical_tone(tone, nf);
            const auto col = static_cast<Eigen::Index>(vec_index(slot, tone, nt));
            // tone_spacing * sample_period = 1/N_f, so the phase at sample k
            // is m k / N_f (reduced mod N_f for accuracy).
            for (std::size_t i = 0; i < nf; ++i)
            {
                const std::size_t k = slot * nf + i;
                const long num = (m * static_cast<long>(k)) % static_cast<long>(nf);
                basis.matrix(static_cast<Eigen::Index>(k), col) =
                    amp * unit_phasor(static_cast<double>(num) / static_cast<double>(nf));
            }
        }
    }
    return basis;
}

ModulationBasis ofdm_matrix(const GridDesign& grid)
{
    ModulationBasis basis = ostf_matrix(ofdm_grid(grid));
    basis.scheme = Scheme::ofdm;
    return basis;
}

CMatrix sfft_matrix(std::size_t time_slots, std::size_t tones)
{
    const CMatrix ut = dft_matrix(time_slots);
    const CMatrix uf = dft_matrix(tones);
    // conj(U_f^H) = U_f^T
    const CMatrix left = uf.transpose();
    const CMatrix right = ut.adjoint();
    const auto nt = static_cast<Eigen::Index>(time_slots);
    const auto nf = static_cast<Eigen::Index>(tones);
    CMatrix out(nt * nf, nt * nf);
    for (Eigen::Index a = 0; a < nf; ++a)
        for (Eigen::Index b = 0; b < nf; ++b)
            out.block(a * nt, b * nt, nt, nt) = left(a, b) * right;
    return out;
}

ModulationBasis otfs_matrix(const GridDesign& grid)
{
    validate(grid);
    const CMatrix sfft = sfft_matrix(grid.time_slots, grid.tones);
    return {Scheme::otfs, ostf_apply(grid, sfft.adjoint()), grid};
}

CMatrix haar_unitary(std::size_t n, std::uint64_t seed)
{
    const auto ni = static_cast<Eigen::Index>(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    CMatrix a(ni, ni);
    for (Eigen::Index j = 0; j < ni; ++j)
        for (Eigen::Index i = 0; i < ni; ++i)
        {
            const double re = gauss(rng);
            const double im = gauss(rng);
            a(i, j) = {re, im};
        }

    Eigen::HouseholderQR<CMatrix> qr(a);
    const CMatrix& r = qr.matrixQR();
    const double floor = 1e-10 * std::sqrt(static_cast<double>(n));
    CMatrix q = qr.householderQ();
    for (Eigen::Index j = 0; j < ni; ++j)
    {
        const cplx d = r(j, j);
        if (std::abs(d) < floor)
            throw std::runtime_error("haar_unitary: Gaussian draw is rank deficient");
        q.col(j) *= d / std::abs(d);
    }
    return q;
}

CMatrix random_precoder(std::size_t n, std::uint64_t seed)
{
    for (std::uint64_t attempt = 0;; ++attempt)
    {
        try
        {
            return haar_unitary(n, seed + attempt);
        }
        catch (const std::runtime_error&)
        {
            if (attempt >= 16)
                throw;
        }
    }
}

ModulationBasis ostf_u_matrix(const GridDesign& grid, std::uint64_t seed)
{
    validate(grid);
    return {Scheme::ostf_u, ostf_apply(grid, random_precoder(grid.dimension, seed)), grid};
}

CMatrix ostf_apply_adjoint(const GridDesign& grid, const CMatrix& m)
{
    require_dimension(m, grid.dimension, "ostf_apply_adjoint");
    const auto nt = static_cast<Eigen::Index>(grid.time_slots);
    const auto nf = static_cast<Eigen::Index>(grid.tones);
    const Eigen::Index cols = m.cols();
    const CMatrix ufh = dft_matrix(grid.tones).adjoint();

    // Column-major m(k, c) with k = slot * N_f + i is an N_f x (N_t * cols)
    // matrix with entry (i, slot + N_t c).
    Eigen::Map<const CMatrix> blocks(m.data(), nf, nt * cols);
    const CMatrix t = ufh * blocks;

    CMatrix out(nt * nf, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index tone = 0; tone < nf; ++tone)
            for (Eigen::Index slot = 0; slot < nt; ++slot)
                out(slot + tone * nt, c) = t(tone, slot + nt * c);
    return out;
}

CMatrix ostf_apply(const GridDesign& grid, const CMatrix& m)
{
    require_dimension(m, grid.dimension, "ostf_apply");
    const auto nt = static_cast<Eigen::Index>(grid.time_slots);
    const auto nf = static_cast<Eigen::Index>(grid.tones);
    const Eigen::Index cols = m.cols();
    const CMatrix uf = dft_matrix(grid.tones);

    CMatrix t(nf, nt * cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index tone = 0; tone < nf; ++tone)
            for (Eigen::Index slot = 0; slot < nt; ++slot)
                t(tone, slot + nt * c) = m(slot + tone * nt, c);

    CMatrix out(nt * nf, cols);
    Eigen::Map<CMatrix> blocks(out.data(), nf, nt * cols);
    blocks.noalias() = uf * t;
    return out;
}

namespace {

// For each column c, reshape to X (N_t x N_f) and return vec(left * X * right).
CMatrix separable_apply(const CMatrix& left, const CMatrix& right, const CMatrix& m)
{
    const Eigen::Index nt = left.rows();
    const Eigen::Index nf = right.rows();
    const Eigen::Index cols = m.cols();

    Eigen::Map<const CMatrix> stacked(m.data(), nt, nf * cols);
    const CMatrix t = left * stacked;

    CMatrix out(nt * nf, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
    {
        Eigen::Map<const CMatrix> x(t.data() + c * nt * nf, nt, nf);
        Eigen::Map<CMatrix> y(out.data() + c * nt * nf, nt, nf);
        y.noalias() = x * right;
    }
    return out;
}

} // namespace

CMatrix sfft_apply(std::size_t time_slots, std::size_t tones, const CMatrix& m)
{
    require_dimension(m, time_slots * tones, "sfft_apply");
    // X_dd = U_t^H X_tf U_f
    return separable_apply(dft_matrix(time_slots).adjoint(), dft_matrix(tones), m);
}

CMatrix sfft_apply_adjoint(std::size_t time_slots, std::size_t tones, const CMatrix& m)
{
    require_dimension(m, time_slots * tones, "sfft_apply_adjoint");
    // X_tf = U_t X_dd U_f^H
    return separable_apply(dft_matrix(time_slots), dft_matrix(tones).adjoint(), m);
}

cplx qam4_symbol(unsigned label)
{
    const double a = 1.0 / std::numbers::sqrt2;
    return {(label & 2u) ? -a : a, (label & 1u) ? -a : a};
}

unsigned qam4_decide(cplx z)
{
    return (z.real() < 0.0 ? 2u : 0u) | (z.imag() < 0.0 ? 1u : 0u);
}

std::vector<cplx> qam4_map(std::span<const std::uint8_t> bits)
{
    if (bits.size() % 2 != 0)
        throw std::invalid_argument("qam4_map: bit count must be even");
    std::vector<cplx> out(bits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = qam4_symbol((bits[2 * i] ? 2u : 0u) | (bits[2 * i + 1] ? 1u : 0u));
    return out;
}

Qam4Decisions qam4_demap(std::span<const cplx> z)
{
    Qam4Decisions d;
    d.bits.reserve(2 * z.size());
    d.symbols.reserve(z.size());
    for (const cplx& v : z)
    {
        const unsigned label = qam4_decide(v);
        d.bits.push_back(static_cast<std::uint8_t>((label >> 1) & 1u));
        d.bits.push_back(static_cast<std::uint8_t>(label & 1u));
        d.symbols.push_back(qam4_symbol(label));
    }
    return d;
}

} // namespace otfsim
