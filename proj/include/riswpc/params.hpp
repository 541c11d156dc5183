#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace riswpc {

// dBm <-> watts. All internal computation runs in linear units; dBm appears
// only at interface boundaries.
inline double dbm_to_watts(double dbm) {
    return 1e-3 * std::pow(10.0, dbm / 10.0);
}

inline double watts_to_dbm(double watts) {
    if (!(watts > 0.0)) {
        throw std::domain_error("watts_to_dbm: power must be positive, got " +
                                std::to_string(watts));
    }
    return 10.0 * std::log10(watts * 1e3);
}

/// Scalar link parameters shared by the analytic and simulation layers.
///
/// Defaults follow the reference operating point: alpha=0.4, tau_c=1,
/// eta=0.85, r=1.2 bits/s/Hz, M=50, with normalized path loss (zeta=1) and
/// a -90 dBm noise floor.
struct SystemParams {
    double alpha = 0.4;        // energy-transfer fraction of the coherence interval, in (0,1)
    double tau_c = 1.0;        // coherence interval, seconds
    double eta = 0.85;         // energy conversion efficiency, in (0,1]
    double p_b_dbm = 10.0;     // BS transmit power, dBm
    double zeta = 1.0;         // one-hop cascaded path loss, linear power gain
    double sigma2_dbm = -90.0; // noise variance at the BS, dBm
    double r = 1.2;            // target codeword rate, bits/s/Hz
    std::size_t m = 50;        // number of RIS elements

    double p_b_watts() const { return dbm_to_watts(p_b_dbm); }
    double sigma2_watts() const { return dbm_to_watts(sigma2_dbm); }

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw std::invalid_argument("SystemParams: alpha must lie in (0,1), got " +
                                        std::to_string(alpha));
        }
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw std::invalid_argument("SystemParams: eta must lie in (0,1], got " +
                                        std::to_string(eta));
        }
        if (!(tau_c > 0.0)) {
            throw std::invalid_argument("SystemParams: tau_c must be positive, got " +
                                        std::to_string(tau_c));
        }
        if (!(zeta > 0.0)) {
            throw std::invalid_argument("SystemParams: zeta must be positive, got " +
                                        std::to_string(zeta));
        }
        if (!(r >= 0.0)) {
            throw std::invalid_argument("SystemParams: r must be non-negative, got " +
                                        std::to_string(r));
        }
        if (m < 1) {
            throw std::invalid_argument("SystemParams: element count m must be >= 1");
        }
        if (!std::isfinite(p_b_dbm) || !std::isfinite(sigma2_dbm)) {
            throw std::invalid_argument("SystemParams: p_b_dbm and sigma2_dbm must be finite");
        }
    }
};

/// Effective pump power P_e = eta * alpha * P_b / (1 - alpha), watts.
/// This is the transmit power of the user per unit of cascaded channel gain:
/// energy harvested over alpha*tau_c, spent over (1-alpha)*tau_c.
inline double effective_pump_power(const SystemParams& p) {
    p.validate();
    return p.eta * p.alpha * p.p_b_watts() / (1.0 - p.alpha);
}

/// Noise-normalized pump power p_e = P_e / sigma^2 (dimensionless).
inline double snr_scale(const SystemParams& p) {
    const double sigma2 = p.sigma2_watts();
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw std::invalid_argument("snr_scale: noise power must be positive and finite, got " +
                                    std::to_string(sigma2) + " W");
    }
    return effective_pump_power(p) / sigma2;
}

} // namespace riswpc
