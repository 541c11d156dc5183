#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "riswpc/channel.hpp"
#include "riswpc/params.hpp"

// Seeded, chunk-parallel Monte Carlo engine. Trials are partitioned into
// fixed-size chunks; chunk c owns an independent sub-stream derived from
// (seed, c), so a trial's realization depends only on the seed and its trial
// index, never on scheduling. Per-chunk partial sums are stored by chunk
// index and combined in index order with compensated summation, which makes
// every estimate bit-identical for any worker count.

namespace riswpc::mc {

struct McConfig {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    std::uint64_t chunk_size = 8192; // trials per deterministic sub-stream
    unsigned workers = 0;            // 0 = one per hardware thread

    void validate() const {
        if (trials < 1) throw std::invalid_argument("McConfig: trials must be >= 1");
        if (chunk_size < 1) throw std::invalid_argument("McConfig: chunk_size must be >= 1");
    }
};

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
};

/// Empirical estimate: sample mean, standard error (sample std / sqrt(n)),
/// normal-approximation 95% interval, and, for proportions, a Wilson score
/// interval that stays meaningful when the event count is 0 or n.
struct McEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    std::optional<ConfidenceInterval> wilson;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 chunk_stream(std::uint64_t seed, std::uint64_t chunk) {
    return std::mt19937_64{mix64(mix64(seed) + chunk)};
}

// Neumaier compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

/// Runs mc.trials trials and returns the per-statistic totals. The trial
/// functor is copied once per worker, so mutable scratch state inside it is
/// worker-private; it must write NStats finite values per trial.
template <std::size_t NStats, typename TrialFn>
std::array<double, NStats> accumulate_trials(const McConfig& mc, const TrialFn& trial) {
    mc.validate();
    const std::uint64_t n_chunks = (mc.trials + mc.chunk_size - 1) / mc.chunk_size;
    std::vector<std::array<double, NStats>> partials(n_chunks);

    std::atomic<std::uint64_t> next_chunk{0};
    std::atomic<bool> aborted{false};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run_chunks = [&]() {
        TrialFn local_trial = trial;
        std::array<double, NStats> stats{};
        try {
            while (!aborted.load(std::memory_order_relaxed)) {
                const std::uint64_t c = next_chunk.fetch_add(1);
                if (c >= n_chunks) break;
                const std::uint64_t begin = c * mc.chunk_size;
                const std::uint64_t end = std::min(begin + mc.chunk_size, mc.trials);
                std::mt19937_64 rng = chunk_stream(mc.seed, c);
                std::array<CompensatedSum, NStats> acc{};
                for (std::uint64_t i = begin; i < end; ++i) {
                    local_trial(rng, stats);
                    for (std::size_t s = 0; s < NStats; ++s) {
                        if (!std::isfinite(stats[s])) {
                            throw std::runtime_error(
                                "monte carlo aborted: non-finite statistic at trial " +
                                std::to_string(i));
                        }
                        acc[s].add(stats[s]);
                    }
                }
                for (std::size_t s = 0; s < NStats; ++s) partials[c][s] = acc[s].value();
            }
        } catch (...) {
            std::scoped_lock lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            aborted.store(true, std::memory_order_relaxed);
        }
    };

    unsigned workers = mc.workers != 0 ? mc.workers
                                       : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_chunks));
    if (workers <= 1) {
        run_chunks();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run_chunks);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::array<double, NStats> totals{};
    for (std::size_t s = 0; s < NStats; ++s) {
        CompensatedSum total;
        for (std::uint64_t c = 0; c < n_chunks; ++c) total.add(partials[c][s]);
        totals[s] = total.value();
    }
    return totals;
}

inline McEstimate make_estimate(double sum, double sum_sq, const McConfig& mc) {
    const double n = static_cast<double>(mc.trials);
    McEstimate est;
    est.mean = sum / n;
    double sample_var = 0.0;
    if (mc.trials > 1) {
        sample_var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    }
    est.std_err = std::sqrt(sample_var / n);
    est.ci95_low = est.mean - 1.96 * est.std_err;
    est.ci95_high = est.mean + 1.96 * est.std_err;
    est.trials = mc.trials;
    est.seed = mc.seed;
    return est;
}

inline ConfidenceInterval wilson_interval(double p_hat, double n) {
    constexpr double z = 1.96;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p_hat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denom;
    return {center - half, center + half};
}

// Proportion estimate from an indicator sum; sum_sq equals sum for 0/1 data.
inline McEstimate make_proportion_estimate(double sum, const McConfig& mc) {
    McEstimate est = make_estimate(sum, sum, mc);
    est.wilson = wilson_interval(est.mean, static_cast<double>(mc.trials));
    return est;
}

struct CascadeTrial {
    SystemParams params;
    ChannelRealization scratch;

    double draw_t(std::mt19937_64& rng) {
        sample_channel_into(scratch, params.m, rng);
        return cascade_sum(scratch);
    }

    double draw_snr(std::mt19937_64& rng) {
        const double z = instantaneous_snr(params, draw_t(rng));
        if (!std::isfinite(z)) {
            throw std::runtime_error("monte carlo aborted: non-finite SNR (p_b_dbm=" +
                                     std::to_string(params.p_b_dbm) + ", sigma2_dbm=" +
                                     std::to_string(params.sigma2_dbm) + ")");
        }
        return z;
    }
};

} // namespace detail

/// Empirical outage probability: fraction of trials in which
/// (1 - alpha) * log2(1 + z_u) falls below the codeword rate r.
inline McEstimate simulate_outage(const SystemParams& p, const McConfig& mc) {
    p.validate();
    detail::CascadeTrial kernel{p, {}};
    auto trial = [kernel](std::mt19937_64& rng, std::array<double, 1>& out) mutable {
        const double z = kernel.draw_snr(rng);
        const double rate = (1.0 - kernel.params.alpha) * std::log2(1.0 + z);
        out[0] = rate < kernel.params.r ? 1.0 : 0.0;
    };
    const auto sums = detail::accumulate_trials<1>(mc, trial);
    return detail::make_proportion_estimate(sums[0], mc);
}

/// Empirical mean achievable rate E[log2(1 + z_u)], bits/s/Hz, optionally
/// scaled by the (1 - alpha) transmit-time fraction.
inline McEstimate simulate_rate(const SystemParams& p, const McConfig& mc,
                                bool apply_time_fraction = false) {
    p.validate();
    detail::CascadeTrial kernel{p, {}};
    const double prefactor = apply_time_fraction ? 1.0 - p.alpha : 1.0;
    auto trial = [kernel, prefactor](std::mt19937_64& rng, std::array<double, 2>& out) mutable {
        const double z = kernel.draw_snr(rng);
        const double rate = prefactor * std::log1p(z) / std::numbers::ln2;
        out[0] = rate;
        out[1] = rate * rate;
    };
    const auto sums = detail::accumulate_trials<2>(mc, trial);
    return detail::make_estimate(sums[0], sums[1], mc);
}

/// Empirical moments of the cascaded sum T: mean, sample variance, and raw
/// fourth moment, each with its own standard error.
struct TMomentsEstimate {
    McEstimate mean;
    McEstimate variance;
    McEstimate fourth_moment;
};

inline TMomentsEstimate sample_T_moments(std::size_t m, const McConfig& mc) {
    if (m == 0) {
        throw std::invalid_argument("sample_T_moments: element count m must be >= 1");
    }
    SystemParams p;
    p.m = m;
    detail::CascadeTrial kernel{p, {}};
    auto trial = [kernel](std::mt19937_64& rng, std::array<double, 5>& out) mutable {
        const double t = kernel.draw_t(rng);
        const double t2 = t * t;
        const double t4 = t2 * t2;
        out = {t, t2, t2 * t, t4, t4 * t4};
    };
    const auto sums = detail::accumulate_trials<5>(mc, trial);
    const double n = static_cast<double>(mc.trials);
    const double m1 = sums[0] / n;
    const double m2 = sums[1] / n;
    const double m3 = sums[2] / n;
    const double m4 = sums[3] / n;
    const double m8 = sums[4] / n;

    TMomentsEstimate out;
    out.mean = detail::make_estimate(sums[0], sums[1], mc);

    const double var = mc.trials > 1
                           ? std::max(0.0, (sums[1] - sums[0] * sums[0] / n) / (n - 1.0))
                           : 0.0;
    // std err of the sample variance via the fourth central moment
    const double central4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
    out.variance.mean = var;
    out.variance.std_err = std::sqrt(std::max(0.0, central4 - var * var) / n);
    out.variance.ci95_low = var - 1.96 * out.variance.std_err;
    out.variance.ci95_high = var + 1.96 * out.variance.std_err;
    out.variance.trials = mc.trials;
    out.variance.seed = mc.seed;

    out.fourth_moment.mean = m4;
    out.fourth_moment.std_err = std::sqrt(std::max(0.0, m8 - m4 * m4) / n);
    out.fourth_moment.ci95_low = m4 - 1.96 * out.fourth_moment.std_err;
    out.fourth_moment.ci95_high = m4 + 1.96 * out.fourth_moment.std_err;
    out.fourth_moment.trials = mc.trials;
    out.fourth_moment.seed = mc.seed;
    return out;
}

} // namespace riswpc::mc
