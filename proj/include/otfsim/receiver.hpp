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

#include <string_view>

#include "otfsim/channel.hpp"
#include "otfsim/grid.hpp"
#include "otfsim/modulation.hpp"
#include "otfsim/types.hpp"

namespace otfsim {

/// How much of the effective channel the MMSE filter is designed from.
enum class CsiMode { full, diagonal };

std::string_view to_string(CsiMode csi);

/// Linear MMSE receiver for y = sqrt(snr) H x + w, w ~ CN(0, I).
///
/// filter = (snr H H^H + I)^{-1} H, composite = filter^H H,
/// noise_covariance = filter^H filter. With diagonal CSI, H is replaced by
/// diag(H) when designing the filter; composite still uses the full H.
struct ReceiverState
{
    CMatrix channel;
    CMatrix filter;
    CMatrix composite;
    CMatrix noise_covariance;
    double snr = 0.0;
    CsiMode csi = CsiMode::full;
};

struct LinkMetrics
{
    RVector sinr;
    double capacity_bps_hz = 0.0;
    double gamma = 0.0;           ///< diagonality of the effective channel
    double composite_gamma = 0.0; ///< diagonality of the composite channel
    double eig_capacity_bps_hz = 0.0;
};

/// U^H * twisted * U_N^H * U for the basis matrix U.
CMatrix effective_channel(const ModulationBasis& basis, const SampledChannel& sampled);

/// Q^H H Q
CMatrix conjugate_by(const CMatrix& q, const CMatrix& h);

/// Effective OSTF channel from the time-domain operator, using the block
/// structure of the basis.
CMatrix ostf_effective_channel(const GridDesign& grid, const CMatrix& time_domain);

/// U_sfft H_ostf U_sfft^H, the OTFS effective channel.
CMatrix otfs_effective_channel(const GridDesign& grid, const CMatrix& ostf_channel);

/// Throws std::invalid_argument if snr <= 0 and std::runtime_error on
/// non-finite channel entries.
ReceiverState mmse_filter(const CMatrix& channel, double snr, CsiMode csi);

/// Per-dimension SINR at the filter output. A filter row that is
/// identically zero gives SINR 0.
RVector sinr_per_dimension(const ReceiverState& state);

/// (1/N) sum log2(1 + sinr), bps/Hz.
double capacity(const RVector& sinr);

/// Eigenvalues of H^H H in ascending order, clamped at zero.
RVector gram_eigenvalues(const CMatrix& channel);

/// (1/N) sum log2(1 + snr * lambda_n) over the eigenvalues of H^H H.
double eig_capacity(const CMatrix& channel, double snr);
double eig_capacity_from_eigenvalues(const RVector& eigenvalues, double snr);

/// Singular values in descending order.
RVector singular_values(const CMatrix& m);

/// Fraction of the squared Frobenius norm on the diagonal. Throws
/// std::invalid_argument for an all-zero matrix.
double diagonality_metric(const CMatrix& m);

LinkMetrics link_metrics(const ReceiverState& state);

/// Per-dimension MMSE output statistics for one SNR.
struct MmseSummary
{
    RVector composite_diagonal; ///< composite(n, n), real and >= 0 for both CSI modes
    RVector sinr;
    double composite_gamma = 0.0; ///< diagonality of the composite channel
};

/// Full-CSI MMSE evaluated through the eigendecomposition
/// H^H H = V diag(lambda) V^H. Then composite = V diag(lambda/(snr lambda + 1)) V^H
/// and noise_covariance = V diag(lambda/(snr lambda + 1)^2) V^H, so every
/// SNR point costs O(N^2) once V is known.
class SpectralMmse
{
public:
    SpectralMmse(RVector eigenvalues, CMatrix eigenvectors);

    /// From the channel itself (one Hermitian eigendecomposition).
    static SpectralMmse from_channel(const CMatrix& channel);

    MmseSummary evaluate(double snr) const;

    /// filter^H y = (snr H^H H + I)^{-1} H^H y
    CVector apply_filter(const CMatrix& channel, const CVector& y, double snr) const;

    /// Same receiver for Q^H H Q: eigenvectors become Q^H V.
    SpectralMmse rotated(const CMatrix& q_adjoint_v) const;

    const RVector& eigenvalues() const { return lambda_; }
    const CMatrix& eigenvectors() const { return vectors_; }

private:
    RVector lambda_;
    CMatrix vectors_;
    Eigen::MatrixXd power_; // |V|^2 entrywise
};

/// Diagonal-CSI MMSE: per-dimension filter on diag(H), interference from
/// the full H.
class DiagonalMmse
{
public:
    explicit DiagonalMmse(const CMatrix& channel);

    MmseSummary evaluate(double snr) const;

    /// filter^H y with filter = diag(h_n / (snr |h_n|^2 + 1))
    CVector apply_filter(const CVector& y, double snr) const;

private:
    CVector diagonal_;
    RVector row_power_; // sum_i |H(n, i)|^2
};

} // namespace otfsim
