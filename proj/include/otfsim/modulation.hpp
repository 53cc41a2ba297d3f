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
#include <span>
#include <string_view>
#include <vector>

#include "otfsim/grid.hpp"
#include "otfsim/types.hpp"

namespace otfsim {

enum class Scheme { ostf, otfs, ofdm, ostf_u };

std::string_view to_string(Scheme scheme);

/// Unitary N x N modulation matrix; column j is the sampled waveform that
/// carries symbol j.
struct ModulationBasis
{
    Scheme scheme = Scheme::ostf;
    CMatrix matrix;
    GridDesign grid;
};

/// Symbol (slot n, tone m) of an N_t x N_f array sits at n + m * N_t.
inline std::size_t vec_index(std::size_t slot, std::size_t tone, std::size_t time_slots)
{
    return slot + tone * time_slots;
}

/// Storage index 0..N_f-1 to the symmetric tone index used by the
/// waveform: m for m <= (N_f-1)/2, m - N_f above that.
long physical_tone(std::size_t tone, std::size_t tones);

/// Unitary DFT matrix, entry (a, b) = e^{j2pi ab/n} / sqrt(n).
CMatrix dft_matrix(std::size_t n);

/// Sampled short-time Fourier basis: rectangular unit-energy pulses of
/// N_f samples in each of N_t slots, modulated by N_f tones.
ModulationBasis ostf_matrix(const GridDesign& grid);

/// OSTF on the single-slot grid, i.e. OFDM with N subcarriers.
ModulationBasis ofdm_matrix(const GridDesign& grid);

/// Vectorized SFFT, conj(U_{N_f}^H) kron U_{N_t}^H, mapping vec(X_tf) to
/// vec(X_dd) for N_t x N_f symbol arrays.
CMatrix sfft_matrix(std::size_t time_slots, std::size_t tones);

/// OSTF basis preceded by the inverse SFFT (delay-Doppler symbols).
ModulationBasis otfs_matrix(const GridDesign& grid);

/// Unitary drawn by orthonormalizing an i.i.d. CN(0,1) matrix, with the
/// phase of R's diagonal folded back in so the result is Haar distributed.
CMatrix haar_unitary(std::size_t n, std::uint64_t seed);

/// haar_unitary(n, seed), retrying with seed + 1, seed + 2, ... if the
/// Gaussian draw is numerically rank deficient.
CMatrix random_precoder(std::size_t n, std::uint64_t seed);

/// OSTF basis preceded by random_precoder(N, seed).
ModulationBasis ostf_u_matrix(const GridDesign& grid, std::uint64_t seed);

// Structured products that avoid forming the dense bases. All act on the
// columns of `m`, which must have N = N_t * N_f rows.

/// U_stf * m
CMatrix ostf_apply(const GridDesign& grid, const CMatrix& m);
/// U_stf^H * m
CMatrix ostf_apply_adjoint(const GridDesign& grid, const CMatrix& m);
/// U_sfft * m
CMatrix sfft_apply(std::size_t time_slots, std::size_t tones, const CMatrix& m);
/// U_sfft^H * m
CMatrix sfft_apply_adjoint(std::size_t time_slots, std::size_t tones, const CMatrix& m);

// 4-QAM with Gray labels. Bit pair (b0, b1) maps to
// ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2):
//   00 -> (+1+j)/sqrt2   01 -> (+1-j)/sqrt2
//   10 -> (-1+j)/sqrt2   11 -> (-1-j)/sqrt2

/// Two bits per symbol; throws std::invalid_argument on an odd bit count.
std::vector<cplx> qam4_map(std::span<const std::uint8_t> bits);

struct Qam4Decisions
{
    std::vector<std::uint8_t> bits;
    std::vector<cplx> symbols;
};

/// Nearest-point decisions.
Qam4Decisions qam4_demap(std::span<const cplx> z);

cplx qam4_symbol(unsigned label);
/// Two-bit label (b0 << 1 | b1) of the constellation point nearest z.
unsigned qam4_decide(cplx z);

} // namespace otfsim
