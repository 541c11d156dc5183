#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "riswpc/params.hpp"
#include "riswpc/specfun.hpp"

// Closed-form performance layer. The cascaded-sum statistic
// T = sum_m |h_br,m||h_ur,m| is approximated by a Gamma(k,w) distribution
// whose first two moments match E[T] = M*pi/4 and Var[T] = M*(1 - pi^2/16);
// outage and ergodic rate then follow from the Gamma CDF and the fourth
// moment of T.

namespace riswpc::analytic {

/// Moment-matched Gamma parameters for the cascaded sum over m elements:
/// k = m*pi^2/(16 - pi^2), w = (16 - pi^2)/(4*pi). The shape grows linearly
/// in m, the scale is element-count independent.
inline specfun::GammaApprox moment_match(std::size_t m) {
    if (m == 0) {
        throw std::invalid_argument("moment_match: element count m must be >= 1");
    }
    constexpr double pi = std::numbers::pi;
    constexpr double pi2 = pi * pi;
    return {static_cast<double>(m) * pi2 / (16.0 - pi2), (16.0 - pi2) / (4.0 * pi)};
}

/// Outage query: the SNR threshold the fourth power of the cascaded sum is
/// compared against, theta = (2^{r/(1-alpha)} - 1) / (p_e * zeta^2).
/// theta is 0 exactly when r = 0.
struct OutageQuery {
    SystemParams params;
    double threshold = 0.0;

    explicit OutageQuery(const SystemParams& p) : params(p) {
        p.validate();
        const double gain = snr_scale(p) * p.zeta * p.zeta;
        threshold = (std::exp2(p.r / (1.0 - p.alpha)) - 1.0) / gain;
        if (std::isnan(threshold)) {
            throw std::runtime_error("OutageQuery: outage threshold is not a number");
        }
    }
};

/// Gamma-approximate outage probability for a given element count and SNR
/// threshold. The outage event constrains T^4, so the Gamma CDF argument
/// carries the fourth root: Pr[T^4 < theta] = Pr[T < theta^(1/4)].
inline double outage_probability_from_threshold(std::size_t m, double theta) {
    if (!(theta >= 0.0)) {
        throw std::invalid_argument("outage threshold must be non-negative");
    }
    if (theta == 0.0) return 0.0;
    if (std::isinf(theta)) return 1.0;
    const specfun::GammaApprox g = moment_match(m);
    return specfun::reg_lower_incomplete_gamma(g.k, std::pow(theta, 0.25) / g.w);
}

inline double outage_probability(const SystemParams& p) {
    const OutageQuery q(p);
    return outage_probability_from_threshold(p.m, q.threshold);
}

/// Natural log of the outage probability. The linear-domain value underflows
/// double precision once the outage drops below ~1e-308, which happens well
/// inside the default parameter ranges at large element counts; monotonicity
/// and curve-dominance comparisons should use this form.
inline double log_outage_probability(const SystemParams& p) {
    const OutageQuery q(p);
    if (q.threshold == 0.0) return -std::numeric_limits<double>::infinity();
    if (std::isinf(q.threshold)) return 0.0;
    const specfun::GammaApprox g = moment_match(p.m);
    return specfun::log_reg_lower_incomplete_gamma(g.k, std::pow(q.threshold, 0.25) / g.w);
}

/// Gaussian-moment expansion of E[T^4]: mu^4 + 6 mu^2 sigma^2 + 3 sigma^4
/// with mu = m*pi/4 and sigma^2 = m*(1 - pi^2/16). Exact for a normal
/// variable, so the relative error shrinks as m grows; at m = 1 the exact
/// fourth moment is 4 while the expansion gives ~2.239.
inline double fourth_moment_T(std::size_t m) {
    if (m == 0) {
        throw std::invalid_argument("fourth_moment_T: element count m must be >= 1");
    }
    constexpr double pi = std::numbers::pi;
    const double md = static_cast<double>(m);
    const double mu = md * pi / 4.0;
    const double var = md * (1.0 - pi * pi / 16.0);
    const double mu2 = mu * mu;
    return mu2 * mu2 + 6.0 * mu2 * var + 3.0 * var * var;
}

/// Ergodic-rate approximation log2(1 + p_e * zeta^2 * E[T^4]), bits/s/Hz.
/// The expectation is moved inside the logarithm, so this is an
/// approximation to E[log2(1 + z_u)], not the exact mean rate. By default
/// no time-sharing prefactor is applied; pass apply_time_fraction = true to
/// scale by (1 - alpha), the fraction of the interval spent transmitting.
inline double ergodic_rate(const SystemParams& p, bool apply_time_fraction = false) {
    p.validate();
    const double z_mean = snr_scale(p) * p.zeta * p.zeta * fourth_moment_T(p.m);
    const double rate = std::log1p(z_mean) / std::numbers::ln2;
    return apply_time_fraction ? (1.0 - p.alpha) * rate : rate;
}

} // namespace riswpc::analytic
