#include "sqz/cavity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

bool in_unit_interval(double r) { return r > 0.0 && r <= 1.0; }

}  // namespace

void CavityParams::validate() const {
    if (!in_unit_interval(r1) || !in_unit_interval(r2)) {
        throw std::invalid_argument("mirror reflectivities must lie in (0, 1]");
    }
    if (r1 == 1.0 && r2 == 1.0) {
        throw std::invalid_argument("at least one mirror must be partially transmissive");
    }
    if (!(round_trip_loss >= 0.0 && round_trip_loss < 1.0)) {
        throw std::invalid_argument("round-trip loss must lie in [0, 1)");
    }
    if (segments.empty()) {
        throw std::invalid_argument("cavity needs at least one path segment");
    }
    for (const auto& s : segments) {
        if (!(s.length_m > 0.0)) throw std::invalid_argument("segment lengths must be positive");
        if (!(s.index >= 1.0)) throw std::invalid_argument("refractive indices must be >= 1");
    }
}

double CavityParams::optical_path() const {
    double path = 0.0;
    for (const auto& s : segments) path += s.length_m * s.index;
    return path;
}

double CavityParams::round_trip_amplitude() const {
    return std::sqrt(r1 * r2 * (1.0 - round_trip_loss));
}

double finesse(const CavityParams& c) {
    const double rho = c.round_trip_amplitude();
    if (rho >= 1.0) {
        throw PerfectCavityError("round-trip amplitude >= 1: lossless perfect cavity has no finite finesse");
    }
    c.validate();
    return std::numbers::pi * std::sqrt(rho) / (1.0 - rho);
}

double fsr(const CavityParams& c) {
    c.validate();
    const double path = c.optical_path();
    return c.geometry == CavityGeometry::standing_wave ? kSpeedOfLight / (2.0 * path)
                                                       : kSpeedOfLight / path;
}

double linewidth_fwhm(const CavityParams& c) { return fsr(c) / finesse(c); }

double fsr_from_linewidth(double finesse_value, double fwhm_hz) {
    if (!(finesse_value > 0.0) || !(fwhm_hz > 0.0)) {
        throw std::invalid_argument("finesse and linewidth must be positive");
    }
    return finesse_value * fwhm_hz;
}

double decay_rate(const CavityParams& c) { return std::numbers::pi * linewidth_fwhm(c); }

double reflectivity_for_finesse(double finesse_value) {
    if (!(finesse_value > 0.0)) throw std::invalid_argument("finesse must be positive");
    // Solve pi sqrt(rho) / (1 - rho) = F for s = sqrt(rho): F s^2 + pi s - F = 0.
    const double k = std::numbers::pi / finesse_value;
    const double s = (-k + std::sqrt(k * k + 4.0)) / 2.0;
    return s * s;  // rho = sqrt(R * R) = R for symmetric lossless mirrors
}

CavityResponse response(const CavityParams& c, double detuning_hz) {
    const double free_range = fsr(c);
    const double phi = 2.0 * std::numbers::pi * detuning_hz / free_range;
    const std::complex<double> round_trip = std::polar(1.0, phi);

    const double ra1 = std::sqrt(c.r1);
    const double survival = std::sqrt(1.0 - c.round_trip_loss);  // amplitude, per round trip
    const double end_amp = std::sqrt(c.r2) * survival;
    const std::complex<double> denom = 1.0 - ra1 * end_amp * round_trip;

    CavityResponse out;
    out.detuning_hz = detuning_hz;
    out.reflection = (-ra1 + end_amp * round_trip) / denom;
    out.transmission =
        std::sqrt((1.0 - c.r1) * (1.0 - c.r2) * survival) / denom;
    out.intracavity_gain = (1.0 - c.r1) / std::norm(denom);
    return out;
}

double co_resonance_offset(const CavityParams& c, double delta_optical_path_m, double wavelength_m) {
    if (!(std::abs(delta_optical_path_m) < c.optical_path())) {
        throw std::invalid_argument("path difference must be smaller than the one-way optical path");
    }
    if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be positive");
    double fraction = -2.0 * delta_optical_path_m / wavelength_m;
    fraction -= std::ceil(fraction - 0.5);  // (-1/2, 1/2]
    return fraction * fsr(c);
}

double co_resonance_phase_fraction(const CavityParams& c, double offset_hz) {
    return offset_hz / fsr(c);
}

}  // namespace sqz
