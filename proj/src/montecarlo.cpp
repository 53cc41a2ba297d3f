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

#include "otfsim/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "otfsim/modulation.hpp"

namespace otfsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<System> sorted_systems(const ScenarioConfig& cfg)
{
    std::vector<System> s = cfg.systems;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

// Symbols and noise for one SNR point, shared by every system of a trial.
struct Draw
{
    std::vector<unsigned> labels;
    CVector symbols;
    CVector noise;
};

Draw draw_transmission(const ScenarioConfig& cfg, std::size_t trial, std::size_t snr_index, std::size_t n)
{
    Draw d;
    d.labels.resize(n);
    d.symbols.resize(static_cast<Eigen::Index>(n));
    d.noise.resize(static_cast<Eigen::Index>(n));

    std::mt19937_64 sym_rng(derive_seed(cfg.base_seed, trial, SeedStream::symbols, snr_index));
    std::uniform_int_distribution<unsigned> label(0, 3);
    for (std::size_t i = 0; i < n; ++i)
    {
        d.labels[i] = label(sym_rng);
        d.symbols(static_cast<Eigen::Index>(i)) = qam4_symbol(d.labels[i]);
    }

    std::mt19937_64 noise_rng(derive_seed(cfg.base_seed, trial, SeedStream::noise, snr_index));
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    for (std::size_t i = 0; i < n; ++i)
    {
        const double re = gauss(noise_rng);
        const double im = gauss(noise_rng);
        d.noise(static_cast<Eigen::Index>(i)) = {re, im};
    }
    return d;
}

// Detects x_n from z_n / (sqrt(snr) gain_n) and counts errors against the
// transmitted labels.
void count_errors(const CVector& z, const RVector& gain, double snr, const std::vector<unsigned>& labels,
                  SnrOutcome& out)
{
    const double root = std::sqrt(snr);
    for (Eigen::Index i = 0; i < z.size(); ++i)
    {
        const double g = root * gain(i);
        const unsigned decided = qam4_decide(g > 0.0 ? z(i) / g : z(i));
        const unsigned diff = decided ^ labels[static_cast<std::size_t>(i)];
        out.symbol_errors += diff != 0 ? 1 : 0;
        out.bit_errors += static_cast<std::uint64_t>(std::popcount(diff));
    }
    out.symbols += static_cast<std::uint64_t>(z.size());
}

void summarize_sinr(const RVector& sinr, SnrOutcome& out)
{
    out.capacity = capacity(sinr);
    out.sinr_mean = sinr.mean();
    out.sinr_min = sinr.minCoeff();
    out.sinr_max = sinr.maxCoeff();
}

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

// Neumaier compensated sum.
class CompensatedSum
{
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            carry_ += (sum_ - t) + v;
        else
            carry_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

} // namespace

std::string_view to_string(System system)
{
    switch (system)
    {
    case System::eig: return "eig";
    case System::ofdm: return "ofdm";
    case System::ostf: return "ostf";
    case System::ostf_u: return "ostf-u";
    case System::otfs: return "otfs";
    }
    return "?";
}

std::optional<System> parse_system(std::string_view name)
{
    if (name == "eig")
        return System::eig;
    if (name == "ofdm")
        return System::ofdm;
    if (name == "ostf")
        return System::ostf;
    if (name == "ostf-u" || name == "ostf_u" || name == "ostfu")
        return System::ostf_u;
    if (name == "otfs")
        return System::otfs;
    return std::nullopt;
}

std::vector<std::string> check(const ScenarioConfig& cfg)
{
    std::vector<std::string> problems;
    if (!(cfg.bandwidth > 0.0) || !std::isfinite(cfg.bandwidth))
        problems.emplace_back("bandwidth must be positive");
    if (!(cfg.max_delay > 0.0) || !std::isfinite(cfg.max_delay))
        problems.emplace_back("max_delay must be positive");
    if (!(cfg.max_doppler > 0.0) || !std::isfinite(cfg.max_doppler))
        problems.emplace_back("max_doppler must be positive");
    if (cfg.max_delay > 0.0 && cfg.max_doppler > 0.0 && cfg.max_delay * 2.0 * cfg.max_doppler >= 1.0)
        problems.emplace_back("channel is overspread (max_delay * 2 max_doppler >= 1)");
    if (cfg.num_paths < 1)
        problems.emplace_back("paths must be at least 1");
    if (cfg.time_slots < 1)
        problems.emplace_back("time_slots must be at least 1");
    if (cfg.trials < 1)
        problems.emplace_back("trials must be at least 1");
    if (cfg.snr_db.empty())
        problems.emplace_back("snr list is empty");
    for (double s : cfg.snr_db)
        if (!std::isfinite(s))
        {
            problems.emplace_back("snr values must be finite");
            break;
        }
    if (cfg.systems.empty())
        problems.emplace_back("scheme list is empty");
    return problems;
}

GridDesign scenario_grid(const ScenarioConfig& cfg)
{
    return design_grid(cfg.max_delay, cfg.max_doppler, cfg.bandwidth, cfg.time_slots);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, SeedStream stream, std::uint64_t sub)
{
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ trial);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    return splitmix64(h ^ sub);
}

ChannelRealization trial_channel(const ScenarioConfig& cfg, std::size_t trial_index)
{
    return draw_channel(cfg.max_delay, cfg.max_doppler, cfg.num_paths,
                        derive_seed(cfg.base_seed, trial_index, SeedStream::channel));
}

TrialResult run_trial(const ScenarioConfig& cfg, std::size_t trial_index, const RunOptions& options,
                      TrialDetail* detail)
{
    if (const auto problems = check(cfg); !problems.empty())
        throw std::invalid_argument("invalid scenario: " + problems.front());

    const GridDesign grid = scenario_grid(cfg);
    const std::vector<System> systems = sorted_systems(cfg);
    const std::size_t n = grid.dimension;
    const std::size_t points = cfg.snr_db.size();

    const ChannelRealization ch =
        options.channel_source ? options.channel_source(trial_index) : trial_channel(cfg, trial_index);

    const bool has_eig = std::find(systems.begin(), systems.end(), System::eig) != systems.end();
    const bool has_modulated = systems.size() > (has_eig ? 1u : 0u);
    const bool spectral_full = options.route == ReceiverRoute::spectral && cfg.csi == CsiMode::full && has_modulated;

    // Shared by every system; failures are reported against the first one.
    CMatrix ostf_channel;
    std::optional<SpectralMmse> ostf_mmse;
    RVector eigenvalues;
    try
    {
        ostf_channel = ostf_effective_channel(grid, time_domain_operator(ch, grid));
        if (!ostf_channel.allFinite())
            throw std::runtime_error("non-finite effective channel");
        if (spectral_full)
        {
            ostf_mmse = SpectralMmse::from_channel(ostf_channel);
            eigenvalues = ostf_mmse->eigenvalues();
        }
        else if (has_eig)
        {
            eigenvalues = gram_eigenvalues(ostf_channel);
        }
    }
    catch (const std::exception& e)
    {
        throw std::runtime_error("trial " + std::to_string(trial_index) + ", scheme " +
                                 std::string(to_string(systems.front())) + ": " + e.what());
    }

    std::vector<Draw> draws;
    draws.reserve(points);
    for (std::size_t s = 0; s < points; ++s)
        draws.push_back(draw_transmission(cfg, trial_index, s, n));

    TrialResult result;
    result.trial = trial_index;
    if (detail)
        detail->systems.clear();

    for (System sys : systems)
    {
        SystemTrial st;
        st.system = sys;
        st.per_snr.resize(points);
        TrialDetail::PerSystem det;
        det.system = sys;

        try
        {
            if (sys == System::eig)
            {
                st.gamma_channel = 1.0;
                const RVector gains = eigenvalues.cwiseSqrt();
                for (std::size_t s = 0; s < points; ++s)
                {
                    const double snr = db_to_linear(cfg.snr_db[s]);
                    const Draw& d = draws[s];
                    if (options.observer)
                        options.observer(sys, s, d.symbols, d.noise);
                    SnrOutcome& out = st.per_snr[s];
                    const RVector sinr = snr * eigenvalues;
                    summarize_sinr(sinr, out);
                    out.capacity = eig_capacity_from_eigenvalues(eigenvalues, snr);
                    out.gamma_composite = 1.0;
                    // z_n = sqrt(snr) sigma_n x_n + w_n on the singular vectors
                    CVector z = std::sqrt(snr) * gains.cast<cplx>().cwiseProduct(d.symbols) + d.noise;
                    count_errors(z, gains, snr, d.labels, out);
                    if (detail)
                        det.per_snr.push_back({gains.cwiseAbs2(), sinr});
                }
                if (detail)
                    det.channel_diagonal = gains.cast<cplx>();
            }
            else
            {
                CMatrix channel;
                std::optional<SpectralMmse> mmse;
                switch (sys)
                {
                case System::ostf:
                    channel = ostf_channel;
                    if (spectral_full)
                        mmse = *ostf_mmse;
                    break;
                case System::otfs:
                    channel = otfs_effective_channel(grid, ostf_channel);
                    if (spectral_full)
                        mmse = ostf_mmse->rotated(sfft_apply(grid.time_slots, grid.tones, ostf_mmse->eigenvectors()));
                    break;
                case System::ofdm:
                    channel = frequency_domain_operator(ch, grid);
                    if (spectral_full)
                    {
                        const CMatrix spread = ostf_apply(grid, ostf_mmse->eigenvectors());
                        CMatrix rotated(spread.rows(), spread.cols());
                        rotated.noalias() = dft_matrix(n).adjoint() * spread;
                        mmse = ostf_mmse->rotated(rotated);
                    }
                    break;
                case System::ostf_u: {
                    const CMatrix precoder =
                        random_precoder(n, derive_seed(cfg.base_seed, trial_index, SeedStream::precoder));
                    channel = conjugate_by(precoder, ostf_channel);
                    if (spectral_full)
                    {
                        CMatrix rotated(precoder.cols(), precoder.cols());
                        rotated.noalias() = precoder.adjoint() * ostf_mmse->eigenvectors();
                        mmse = ostf_mmse->rotated(rotated);
                    }
                    break;
                }
                case System::eig:
                    break;
                }

                st.gamma_channel = diagonality_metric(channel);
                std::optional<DiagonalMmse> diag_mmse;
                if (options.route == ReceiverRoute::spectral && cfg.csi == CsiMode::diagonal)
                    diag_mmse.emplace(channel);

                for (std::size_t s = 0; s < points; ++s)
                {
                    const double snr = db_to_linear(cfg.snr_db[s]);
                    const Draw& d = draws[s];
                    if (options.observer)
                        options.observer(sys, s, d.symbols, d.noise);
                    SnrOutcome& out = st.per_snr[s];

                    const CVector y = std::sqrt(snr) * (channel * d.symbols) + d.noise;
                    CVector z;
                    RVector composite_diag;
                    RVector sinr;
                    if (options.route == ReceiverRoute::direct)
                    {
                        const ReceiverState rs = mmse_filter(channel, snr, cfg.csi);
                        sinr = sinr_per_dimension(rs);
                        composite_diag = rs.composite.diagonal().real();
                        out.gamma_composite = diagonality_metric(rs.composite);
                        z = rs.filter.adjoint() * y;
                    }
                    else
                    {
                        const MmseSummary sm = mmse ? mmse->evaluate(snr) : diag_mmse->evaluate(snr);
                        sinr = sm.sinr;
                        composite_diag = sm.composite_diagonal;
                        out.gamma_composite = sm.composite_gamma;
                        z = mmse ? mmse->apply_filter(channel, y, snr) : diag_mmse->apply_filter(y, snr);
                    }
                    if (!sinr.allFinite() || !z.allFinite())
                        throw std::runtime_error("non-finite receiver output");
                    summarize_sinr(sinr, out);
                    count_errors(z, composite_diag, snr, d.labels, out);
                    if (detail)
                        det.per_snr.push_back({composite_diag, sinr});
                }
                if (detail)
                    det.channel_diagonal = channel.diagonal();
            }
        }
        catch (const std::exception& e)
        {
            throw std::runtime_error("trial " + std::to_string(trial_index) + ", scheme " +
                                     std::string(to_string(sys)) + ": " + e.what());
        }

        result.systems.push_back(std::move(st));
        if (detail)
            detail->systems.push_back(std::move(det));
    }
    return result;
}

const AggregateRow& AggregateResult::row(System system, double snr_db) const
{
    for (const AggregateRow& r : rows)
        if (r.system == system && r.snr_db == snr_db)
            return r;
    throw std::out_of_range("AggregateResult: no row for " + std::string(to_string(system)) + " at " +
                            std::to_string(snr_db) + " dB");
}

Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z)
{
    if (n == 0)
        return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double den = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / den;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / den;
    return {k == 0 ? 0.0 : std::max(0.0, centre - half), k == n ? 1.0 : std::min(1.0, centre + half)};
}

AggregateResult aggregate(const ScenarioConfig& cfg, std::span<const TrialResult> trials)
{
    AggregateResult agg;
    agg.config = cfg;
    agg.grid = scenario_grid(cfg);

    std::vector<const TrialResult*> ordered;
    ordered.reserve(trials.size());
    for (const TrialResult& t : trials)
        ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->trial < b->trial; });

    const std::vector<System> systems = sorted_systems(cfg);
    std::vector<std::size_t> snr_order(cfg.snr_db.size());
    for (std::size_t i = 0; i < snr_order.size(); ++i)
        snr_order[i] = i;
    std::stable_sort(snr_order.begin(), snr_order.end(),
                     [&](std::size_t a, std::size_t b) { return cfg.snr_db[a] < cfg.snr_db[b]; });

    for (std::size_t si = 0; si < systems.size(); ++si)
    {
        for (std::size_t s : snr_order)
        {
            AggregateRow row;
            row.system = systems[si];
            row.snr_db = cfg.snr_db[s];
            CompensatedSum cap, gam_h, gam_c, sinr;
            for (const TrialResult* t : ordered)
            {
                const SystemTrial& st = t->systems.at(si);
                const SnrOutcome& o = st.per_snr.at(s);
                cap.add(o.capacity);
                gam_h.add(st.gamma_channel);
                gam_c.add(o.gamma_composite);
                sinr.add(o.sinr_mean);
                row.symbols += o.symbols;
                row.symbol_errors += o.symbol_errors;
                row.bit_errors += o.bit_errors;
                ++row.trials;
            }
            const double nt = static_cast<double>(std::max<std::size_t>(row.trials, 1));
            row.mean_capacity = cap.value() / nt;
            row.mean_gamma_channel = gam_h.value() / nt;
            row.mean_gamma_composite = gam_c.value() / nt;
            row.mean_sinr = sinr.value() / nt;
            if (row.symbols > 0)
            {
                row.ser = static_cast<double>(row.symbol_errors) / static_cast<double>(row.symbols);
                row.ber = static_cast<double>(row.bit_errors) / (2.0 * static_cast<double>(row.symbols));
            }
            const Interval ci = wilson_interval(row.symbol_errors, row.symbols);
            row.ser_ci_lo = ci.lo;
            row.ser_ci_hi = ci.hi;
            agg.rows.push_back(row);
        }
    }
    return agg;
}

AggregateResult run_campaign(const ScenarioConfig& cfg, const RunOptions& options)
{
    if (const auto problems = check(cfg); !problems.empty())
    {
        std::string msg = "invalid scenario:";
        for (const auto& p : problems)
            msg += "\n  " + p;
        throw std::invalid_argument(msg);
    }
    scenario_grid(cfg); // surface grid errors before spawning workers

    std::size_t threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = std::min(threads, cfg.trials);

    std::vector<TrialResult> results(cfg.trials);
    std::vector<std::exception_ptr> errors(cfg.trials);
    std::atomic<std::size_t> next{0};
    std::mutex progress_mutex;
    std::size_t done = 0;

    RunOptions per_trial = options;
    if (threads > 1)
        per_trial.observer = nullptr;

    auto worker = [&] {
        for (;;)
        {
            const std::size_t t = next.fetch_add(1);
            if (t >= cfg.trials)
                return;
            try
            {
                results[t] = run_trial(cfg, t, per_trial);
            }
            catch (...)
            {
                errors[t] = std::current_exception();
            }
            if (options.progress)
            {
                std::lock_guard lock(progress_mutex);
                options.progress(++done, cfg.trials);
            }
        }
    };

    if (threads <= 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i)
            pool.emplace_back(worker);
    }

    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return aggregate(cfg, results);
}

} // namespace otfsim
