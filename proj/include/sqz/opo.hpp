#pragma once

// Sub-threshold degenerate optical parametric oscillator, singly resonant,
// perfectly phase matched, no pump depletion.

#include <array>
#include <complex>

#include "sqz/quantum_state.hpp"

namespace sqz {

struct OpoParams {
    double x = 0.0;        // normalized pump amplitude sqrt(P / P_th), [0, 1)
    double gamma = 1.0;    // cavity amplitude decay rate, rad/s (pi * FWHM)
    double eta_esc = 1.0;  // escape efficiency, [0, 1]

    // Throws AboveThresholdError for x >= 1, std::invalid_argument otherwise.
    void validate() const;
};

// x = sqrt(P / P_th). Throws AboveThresholdError when P >= P_th.
double normalized_pump(double pump_power_w, double threshold_power_w);

enum class GainSense { amplification, deamplification };

// Classical seed gain 1/(1 - x)^2, or 1/(1 + x)^2 for deamplification.
double parametric_gain(double x, GainSense sense = GainSense::amplification);
// Inverse of the amplification branch: x = 1 - 1/sqrt(G), G >= 1.
double pump_for_gain(double gain);

// v_-/+(Omega) = 1 -/+ eta_esc 4x / ((1 +/- x)^2 + (Omega/gamma)^2)
QuadraturePair squeezing_spectrum(const OpoParams& p, double omega);

// Max relative deviation of v_sq over [f_lo, f_hi] (Hz). Requires
// f_hi <= gamma / (2 pi 10); throws std::invalid_argument otherwise.
double audio_band_flatness(const OpoParams& p, double f_lo_hz, double f_hi_hz);

// Classical response of the OPO to a seed injected at offset +Omega from the
// half-pump frequency: the reflected signal at +Omega and the idler generated
// at -Omega. Amplitudes are relative to a unit-amplitude seed. The pump field
// phase is pump_phase_field.
struct SeedResponse {
    std::complex<double> signal;
    std::complex<double> idler;
};
SeedResponse seed_response(const OpoParams& p, double omega, double pump_phase_field);

}  // namespace sqz
