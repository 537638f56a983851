#pragma once

// Plane-wave, single-longitudinal-mode model of a two-mirror resonator.
// Used for the squeezing resonator (standing wave, crystal + air gap) and the
// green mode cleaner (traveling-wave ring folded into an equivalent two-mirror
// model).

#include <complex>
#include <vector>

namespace sqz {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kFundamentalWavelength = 1064e-9;  // m
inline constexpr double kKtpIndex1064 = 1.83;

struct PathSegment {
    double length_m = 0.0;
    double index = 1.0;
};

enum class CavityGeometry { standing_wave, traveling_wave };

struct CavityParams {
    double r1 = 0.0;  // coupler power reflectivity
    double r2 = 0.0;  // end-face power reflectivity
    double round_trip_loss = 0.0;
    std::vector<PathSegment> segments;  // one-way path
    CavityGeometry geometry = CavityGeometry::standing_wave;

    // Throws std::invalid_argument naming the broken invariant.
    void validate() const;

    double optical_path() const;  // sum n_i L_i, one way
    // Round-trip amplitude factor sqrt(r1 r2 (1 - loss)).
    double round_trip_amplitude() const;
};

struct CavityResponse {
    double detuning_hz = 0.0;
    std::complex<double> reflection;
    std::complex<double> transmission;
    // Circulating power relative to incident power.
    double intracavity_gain = 0.0;

    double absorbed() const { return 1.0 - std::norm(reflection) - std::norm(transmission); }
};

// F = pi sqrt(rho) / (1 - rho). Throws PerfectCavityError when rho >= 1.
double finesse(const CavityParams& c);
double fsr(const CavityParams& c);
// FSR / finesse.
double linewidth_fwhm(const CavityParams& c);

// FSR implied by a measured finesse and linewidth.
double fsr_from_linewidth(double finesse_value, double fwhm_hz);
// Amplitude decay rate gamma = pi * FWHM in rad/s.
double decay_rate(const CavityParams& c);
// Symmetric (impedance-matched, lossless) mirror reflectivity that yields the
// requested finesse.
double reflectivity_for_finesse(double finesse_value);

// Complex reflection/transmission at a laser detuning from resonance.
// Reflection convention: F = (-sqrt(r1) + rho e^{i phi}) / (1 - sqrt(r1) rho' e^{i phi}),
// phi = 2 pi detuning / FSR.
CavityResponse response(const CavityParams& c, double detuning_hz);

// Frequency shift needed to bring an orthogonally polarized field back into
// resonance when its one-way optical path differs by delta_optical_path.
// Result lies in (-FSR/2, FSR/2].
double co_resonance_offset(const CavityParams& c, double delta_optical_path_m,
                           double wavelength_m = kFundamentalWavelength);

// Inverse: fraction of a full round-trip phase cycle (offset / FSR) that a
// measured co-resonance offset corresponds to.
double co_resonance_phase_fraction(const CavityParams& c, double offset_hz);

}  // namespace sqz
