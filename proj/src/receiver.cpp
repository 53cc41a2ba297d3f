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

#include "otfsim/receiver.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

#include "otfsim/kernels.hpp"

namespace otfsim {

namespace {

double sinr_from_parts(double snr, double signal, double interference, double noise)
{
    const double den = snr * interference + noise;
    if (den <= 0.0)
        return 0.0;
    return snr * signal / den;
}

} // namespace

std::string_view to_string(CsiMode csi)
{
    return csi == CsiMode::full ? "full" : "diag";
}

CMatrix effective_channel(const ModulationBasis& basis, const SampledChannel& sampled)
{
    if (basis.matrix.rows() != sampled.time_domain.rows())
        throw std::invalid_argument("effective_channel: basis and channel dimensions differ");
    return conjugate_by(basis.matrix, sampled.time_domain);
}

CMatrix conjugate_by(const CMatrix& q, const CMatrix& h)
{
    if (q.rows() != h.rows() || h.rows() != h.cols() || q.rows() != q.cols())
        throw std::invalid_argument("conjugate_by: dimension mismatch");
    CMatrix hq = h * q;
    CMatrix out(q.cols(), q.cols());
    out.noalias() = q.adjoint() * hq;
    return out;
}

CMatrix ostf_effective_channel(const GridDesign& grid, const CMatrix& time_domain)
{
    const CMatrix left = ostf_apply_adjoint(grid, time_domain);
    return ostf_apply_adjoint(grid, left.adjoint()).adjoint();
}

CMatrix otfs_effective_channel(const GridDesign& grid, const CMatrix& ostf_channel)
{
    const CMatrix left = sfft_apply(grid.time_slots, grid.tones, ostf_channel);
    return sfft_apply(grid.time_slots, grid.tones, left.adjoint()).adjoint();
}

ReceiverState mmse_filter(const CMatrix& channel, double snr, CsiMode csi)
{
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::invalid_argument("mmse_filter: snr must be positive and finite");
    if (channel.rows() != channel.cols())
        throw std::invalid_argument("mmse_filter: channel must be square");
    if (!channel.allFinite())
        throw std::runtime_error("mmse_filter: channel has non-finite entries");

    const Eigen::Index n = channel.rows();
    ReceiverState st;
    st.channel = channel;
    st.snr = snr;
    st.csi = csi;

    if (csi == CsiMode::full)
    {
        CMatrix r = CMatrix::Identity(n, n);
        r.selfadjointView<Eigen::Lower>().rankUpdate(channel, snr);
        r.triangularView<Eigen::StrictlyUpper>() = r.adjoint();
        Eigen::LLT<CMatrix> llt(r);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("mmse_filter: Cholesky factorization failed");
        st.filter = llt.solve(channel);
    }
    else
    {
        st.filter = CMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const cplx h = channel(i, i);
            st.filter(i, i) = h / (snr * std::norm(h) + 1.0);
        }
    }
    st.composite.noalias() = st.filter.adjoint() * channel;
    st.noise_covariance.noalias() = st.filter.adjoint() * st.filter;
    return st;
}

RVector sinr_per_dimension(const ReceiverState& st)
{
    const Eigen::Index n = st.composite.rows();
    RVector sinr(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        if (st.filter.col(i).squaredNorm() == 0.0)
        {
            sinr(i) = 0.0;
            continue;
        }
        double interference = 0.0;
        for (Eigen::Index k = 0; k < n; ++k)
            if (k != i)
                interference += std::norm(st.composite(i, k));
        sinr(i) = sinr_from_parts(st.snr, std::norm(st.composite(i, i)), interference,
                                  st.noise_covariance(i, i).real());
    }
    return sinr;
}

double capacity(const RVector& sinr)
{
    if (sinr.size() == 0)
        return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < sinr.size(); ++i)
        acc += std::log2(1.0 + sinr(i));
    return acc / static_cast<double>(sinr.size());
}

RVector gram_eigenvalues(const CMatrix& channel)
{
    CMatrix gram(channel.cols(), channel.cols());
    gram.noalias() = channel.adjoint() * channel;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("gram_eigenvalues: eigensolver did not converge");
    return es.eigenvalues().cwiseMax(0.0);
}

double eig_capacity_from_eigenvalues(const RVector& eigenvalues, double snr)
{
    if (eigenvalues.size() == 0)
        return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        acc += std::log2(1.0 + snr * eigenvalues(i));
    return acc / static_cast<double>(eigenvalues.size());
}

double eig_capacity(const CMatrix& channel, double snr)
{
    return eig_capacity_from_eigenvalues(gram_eigenvalues(channel), snr);
}

RVector singular_values(const CMatrix& m)
{
    Eigen::BDCSVD<CMatrix> svd(m);
    return svd.singularValues();
}

double diagonality_metric(const CMatrix& m)
{
    const double total = kernels::sum_abs2(std::span<const cplx>(m.data(), static_cast<std::size_t>(m.size())));
    if (!(total > 0.0))
        throw std::invalid_argument("diagonality_metric: matrix is zero");
    double diag = 0.0;
    for (Eigen::Index i = 0; i < std::min(m.rows(), m.cols()); ++i)
        diag += std::norm(m(i, i));
    return diag / total;
}

LinkMetrics link_metrics(const ReceiverState& st)
{
    LinkMetrics lm;
    lm.sinr = sinr_per_dimension(st);
    lm.capacity_bps_hz = capacity(lm.sinr);
    lm.gamma = diagonality_metric(st.channel);
    lm.composite_gamma = diagonality_metric(st.composite);
    lm.eig_capacity_bps_hz = eig_capacity(st.channel, st.snr);
    return lm;
}

// ---------------------------------------------------------------------------

SpectralMmse::SpectralMmse(RVector eigenvalues, CMatrix eigenvectors)
    : lambda_(std::move(eigenvalues)), vectors_(std::move(eigenvectors))
{
    if (vectors_.cols() != lambda_.size() || vectors_.rows() != vectors_.cols())
        throw std::invalid_argument("SpectralMmse: eigenvector matrix does not match eigenvalues");
    lambda_ = lambda_.cwiseMax(0.0);
    power_.resize(vectors_.rows(), vectors_.cols());
    kernels::abs2(std::span<const cplx>(vectors_.data(), static_cast<std::size_t>(vectors_.size())),
                  std::span<double>(power_.data(), static_cast<std::size_t>(power_.size())));
}

SpectralMmse SpectralMmse::from_channel(const CMatrix& channel)
{
    CMatrix gram(channel.cols(), channel.cols());
    gram.noalias() = channel.adjoint() * channel;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("SpectralMmse: eigensolver did not converge");
    return SpectralMmse(es.eigenvalues(), es.eigenvectors());
}

SpectralMmse SpectralMmse::rotated(const CMatrix& q_adjoint_v) const
{
    return SpectralMmse(lambda_, q_adjoint_v);
}

MmseSummary SpectralMmse::evaluate(double snr) const
{
    const Eigen::Index n = lambda_.size();
    Eigen::MatrixXd weights(n, 3);
    double composite_energy = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
    {
        const double lam = lambda_(k);
        const double g = 1.0 / (snr * lam + 1.0);
        const double d = lam * g;
        weights(k, 0) = d;         // composite
        weights(k, 1) = d * d;     // composite composite^H
        weights(k, 2) = d * g;     // noise covariance
        composite_energy += d * d;
    }
    const Eigen::MatrixXd diag = power_ * weights;

    MmseSummary out;
    out.composite_diagonal = diag.col(0);
    out.sinr.resize(n);
    double diag_energy = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double c = diag(i, 0);
        const double signal = c * c;
        const double interference = std::max(diag(i, 1) - signal, 0.0);
        out.sinr(i) = sinr_from_parts(snr, signal, interference, diag(i, 2));
        diag_energy += signal;
    }
    out.composite_gamma = composite_energy > 0.0 ? diag_energy / composite_energy : 0.0;
    return out;
}

CVector SpectralMmse::apply_filter(const CMatrix& channel, const CVector& y, double snr) const
{
    CVector t = vectors_.adjoint() * (channel.adjoint() * y);
    for (Eigen::Index k = 0; k < t.size(); ++k)
        t(k) /= snr * lambda_(k) + 1.0;
    return vectors_ * t;
}

DiagonalMmse::DiagonalMmse(const CMatrix& channel)
    : diagonal_(channel.diagonal()), row_power_(channel.rowwise().squaredNorm())
{
}

MmseSummary DiagonalMmse::evaluate(double snr) const
{
    const Eigen::Index n = diagonal_.size();
    MmseSummary out;
    out.composite_diagonal.resize(n);
    out.sinr.resize(n);
    double diag_energy = 0.0, total_energy = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double h2 = std::norm(diagonal_(i));
        const double g = 1.0 / (snr * h2 + 1.0);
        const double w2 = h2 * g * g; // |w_n|^2
        const double c = h2 * g;
        const double signal = c * c;
        const double rowp = w2 * row_power_(i);
        out.composite_diagonal(i) = c;
        out.sinr(i) = w2 > 0.0 ? sinr_from_parts(snr, signal, std::max(rowp - signal, 0.0), w2) : 0.0;
        diag_energy += signal;
        total_energy += rowp;
    }
    out.composite_gamma = total_energy > 0.0 ? diag_energy / total_energy : 0.0;
    return out;
}

CVector DiagonalMmse::apply_filter(const CVector& y, double snr) const
{
    CVector z(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i)
    {
        const cplx h = diagonal_(i);
        z(i) = std::conj(h / (snr * std::norm(h) + 1.0)) * y(i);
    }
    return z;
}

} // namespace otfsim
