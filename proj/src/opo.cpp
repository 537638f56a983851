#include "sqz/opo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sqz/errors.hpp"

namespace sqz {

void OpoParams::validate() const {
    if (x >= 1.0) throw AboveThresholdError("OPO pump at or above threshold (x >= 1)");
    if (!(x >= 0.0)) throw std::invalid_argument("normalized pump amplitude must be >= 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("cavity decay rate must be positive");
    if (!(eta_esc >= 0.0 && eta_esc <= 1.0)) {
        throw std::invalid_argument("escape efficiency must lie in [0, 1]");
    }
}

double normalized_pump(double pump_power_w, double threshold_power_w) {
    if (!(pump_power_w >= 0.0) || !(threshold_power_w > 0.0)) {
        throw std::invalid_argument("pump power must be >= 0 and threshold power > 0");
    }
    if (pump_power_w >= threshold_power_w) {
        throw AboveThresholdError("pump power at or above OPO threshold");
    }
    return std::sqrt(pump_power_w / threshold_power_w);
}

double parametric_gain(double x, GainSense sense) {
    if (x >= 1.0) throw AboveThresholdError("parametric gain diverges at and above threshold");
    if (!(x >= 0.0)) throw std::invalid_argument("normalized pump amplitude must be >= 0");
    const double d = sense == GainSense::amplification ? 1.0 - x : 1.0 + x;
    return 1.0 / (d * d);
}

double pump_for_gain(double gain) {
    if (!(gain >= 1.0)) throw std::invalid_argument("amplification gain must be >= 1");
    return 1.0 - 1.0 / std::sqrt(gain);
}

QuadraturePair squeezing_spectrum(const OpoParams& p, double omega) {
    p.validate();
    const double w2 = (omega / p.gamma) * (omega / p.gamma);
    const double depth = p.eta_esc * 4.0 * p.x;
    // 1 - depth/D rewritten without the cancellation near threshold:
    // D - 4 eta x = (1 - x)^2 + w^2 + 4 x (1 - eta).
    const double v_sq = ((1.0 - p.x) * (1.0 - p.x) + w2 + 4.0 * p.x * (1.0 - p.eta_esc)) /
                        ((1.0 + p.x) * (1.0 + p.x) + w2);
    const double v_anti = 1.0 + depth / ((1.0 - p.x) * (1.0 - p.x) + w2);
    return QuadraturePair(v_sq, v_anti, omega / (2.0 * std::numbers::pi));
}

double audio_band_flatness(const OpoParams& p, double f_lo_hz, double f_hi_hz) {
    p.validate();
    if (!(f_lo_hz >= 0.0) || !(f_hi_hz >= f_lo_hz)) {
        throw std::invalid_argument("band must satisfy 0 <= f_lo <= f_hi");
    }
    if (f_hi_hz > p.gamma / (2.0 * std::numbers::pi * 10.0)) {
        throw std::invalid_argument("band extends beyond a tenth of the cavity half-linewidth");
    }
    // v_sq is monotone in |Omega|, so the band extremes sit at its edges.
    const double lo = squeezing_spectrum(p, 2.0 * std::numbers::pi * f_lo_hz).squeezed();
    const double hi = squeezing_spectrum(p, 2.0 * std::numbers::pi * f_hi_hz).squeezed();
    return std::abs(hi - lo) / lo;
}

SeedResponse seed_response(const OpoParams& p, double omega, double pump_phase_field) {
    p.validate();
    const double coupling = 2.0 * p.gamma * p.eta_esc;
    const double g = p.x * p.gamma;
    const std::complex<double> a(p.gamma, -omega);
    const std::complex<double> det = a * a - g * g;
    SeedResponse out;
    out.signal = coupling * a / det - 1.0;
    out.idler = coupling * g * std::polar(1.0, pump_phase_field) / std::conj(det);
    return out;
}

}  // namespace sqz
