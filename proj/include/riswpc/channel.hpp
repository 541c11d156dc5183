#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "riswpc/params.hpp"

// Rayleigh channel draws, RIS response, and the per-realization energy /
// transmit-power / SNR chain. One realization is drawn per coherence
// interval and reused for both the harvest and uplink phases (quasi-static
// reciprocal block fading).

namespace riswpc {

/// One draw of the two M-element channel vectors.
struct ChannelRealization {
    std::vector<std::complex<double>> h_br; // BS -> RIS
    std::vector<std::complex<double>> h_ur; // user -> RIS

    std::size_t size() const { return h_br.size(); }
};

/// Per-element RIS response: amplitude beta_m in [0,1] and phase theta_m in
/// [0, 2*pi). The diagonal response matrix applies sqrt(beta_m) e^{j theta_m}
/// to element m.
struct RisConfig {
    std::vector<double> beta;
    std::vector<double> theta;
};

/// One circularly-symmetric complex Gaussian draw with zero mean and unit
/// variance. Box-Muller on two 53-bit uniforms, so every draw consumes
/// exactly two engine outputs and the stream position is arithmetic in the
/// draw count.
inline std::complex<double> sample_cn01(std::mt19937_64& rng) {
    const double u1 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double mag = std::sqrt(-std::log1p(-u1)); // |h|^2 ~ Exp(1)
    const double ph = 2.0 * std::numbers::pi * u2;
    return {mag * std::cos(ph), mag * std::sin(ph)};
}

/// Fills an existing realization in place (h_br first, then h_ur), reusing
/// its storage. Hot path for the Monte Carlo engine.
inline void sample_channel_into(ChannelRealization& ch, std::size_t m, std::mt19937_64& rng) {
    if (m == 0) {
        throw std::invalid_argument("sample_channel: element count m must be >= 1");
    }
    ch.h_br.resize(m);
    ch.h_ur.resize(m);
    for (std::size_t i = 0; i < m; ++i) ch.h_br[i] = sample_cn01(rng);
    for (std::size_t i = 0; i < m; ++i) ch.h_ur[i] = sample_cn01(rng);
}

inline ChannelRealization sample_channel(std::size_t m, std::mt19937_64& rng) {
    ChannelRealization ch;
    sample_channel_into(ch, m, rng);
    return ch;
}

/// Phase-aligned RIS configuration: theta_m cancels the cascade phase so
/// each term h_ur,m * sqrt(beta_m) e^{j theta_m} * h_br,m is real and
/// non-negative; amplitudes are set to their maximum beta_m = 1.
/// Zero-magnitude entries get phase 0 (any phase is optimal there).
inline RisConfig aligned_phases(const ChannelRealization& ch) {
    const std::size_t m = ch.size();
    RisConfig ris;
    ris.beta.assign(m, 1.0);
    ris.theta.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double th = -std::arg(ch.h_ur[i] * ch.h_br[i]);
        if (th < 0.0) th += 2.0 * std::numbers::pi;
        if (th >= 2.0 * std::numbers::pi) th = 0.0;
        ris.theta[i] = th;
    }
    return ris;
}

/// Complex cascade h_ur^T * diag(sqrt(beta) e^{j theta}) * h_br for an
/// arbitrary RIS configuration.
inline std::complex<double> cascade_response(const ChannelRealization& ch, const RisConfig& ris) {
    const std::size_t m = ch.size();
    if (ch.h_ur.size() != m || ris.beta.size() != m || ris.theta.size() != m) {
        throw std::invalid_argument("cascade_response: vector lengths must all equal M");
    }
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < m; ++i) {
        const std::complex<double> phase{std::cos(ris.theta[i]), std::sin(ris.theta[i])};
        acc += ch.h_ur[i] * std::sqrt(ris.beta[i]) * phase * ch.h_br[i];
    }
    return acc;
}

/// Cascaded-sum statistic T = sum_m |h_br,m| |h_ur,m|; equals the cascade
/// magnitude attained by the phase-aligned configuration.
inline double cascade_sum(const ChannelRealization& ch) {
    if (ch.h_ur.size() != ch.h_br.size()) {
        throw std::invalid_argument("cascade_sum: h_br and h_ur must have equal length");
    }
    double t = 0.0;
    for (std::size_t i = 0; i < ch.size(); ++i) {
        t += std::abs(ch.h_br[i]) * std::abs(ch.h_ur[i]);
    }
    return t;
}

/// Energy harvested over the transfer phase: eta * alpha * tau_c * P_b * t^2 * zeta,
/// joules. Quadratic in the cascaded gain t.
inline double harvested_energy(const SystemParams& p, double t) {
    p.validate();
    if (!(t >= 0.0)) {
        throw std::invalid_argument("harvested_energy: t must be non-negative");
    }
    return p.eta * p.alpha * p.tau_c * p.p_b_watts() * t * t * p.zeta;
}

/// End-to-end uplink SNR z_u = p_e * zeta^2 * t^4. The fourth power comes
/// from the cascaded gain acting on both the harvest and uplink legs.
inline double instantaneous_snr(const SystemParams& p, double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("instantaneous_snr: t must be non-negative");
    }
    const double t2 = t * t;
    return snr_scale(p) * p.zeta * p.zeta * t2 * t2;
}

} // namespace riswpc
