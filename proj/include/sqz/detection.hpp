#pragma once

// Balanced homodyne detector: optical detection efficiency, flat electronic
// dark noise, and synthesis of shot / squeezed / anti-squeezed noise traces.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sqz/quantum_state.hpp"
#include "sqz/sweep.hpp"

namespace sqz {

// visibility^2 * QE = 0.95 with the measured 98.6% fringe visibility.
inline constexpr double kDefaultVisibility = 0.986;
inline constexpr double kDefaultPdQuantumEfficiency = 0.95 / (0.986 * 0.986);

struct HomodyneParams {
    double lo_power_w = 500e-6;  // metadata only; variances are shot-normalized
    double visibility = kDefaultVisibility;
    double pd_quantum_efficiency = kDefaultPdQuantumEfficiency;
    // Shot noise above electronic dark noise. Infinity disables dark noise.
    double dark_clearance_db = 17.0;

    void validate() const;
};

// visibility^2 * QE
Efficiency detection_efficiency(const HomodyneParams& h);

// v + 10^(-clearance/10). An infinite clearance is the identity.
double add_dark_noise(double variance, double clearance_db);

// Inverse for a level read relative to the measured (dark-noise inflated)
// shot trace: optical v = apparent * (1 + d) - d. Throws
// NonphysicalPairError when the result is not positive.
double remove_dark_noise(double apparent_rel_shot, double clearance_db);

struct SpectrumPoint {
    double frequency_hz = 0.0;
    double level_db = 0.0;
};

struct SpectrumTrace {
    std::string label;
    std::vector<SpectrumPoint> points;
    int points_per_decade = 0;
    std::vector<std::string> artifacts;  // synthetic additions, never model content
};

struct SpectrumSet {
    SpectrumTrace shot;
    SpectrumTrace squeezed;
    SpectrumTrace anti_squeezed;
};

// Synthetic mains pickup lines at 50 and 100 Hz (electronic, added to every
// trace after dark noise). Cosmetic; always flagged.
struct MainsArtifact {
    double level_above_shot_db = 10.0;  // peak electronic power relative to shot noise
};

// Optional pseudo-random estimation ripple (Gaussian, in dB), seeded.
struct EstimationRipple {
    double rms_db = 0.1;
    std::uint64_t seed = 1;
};

struct SynthesisOptions {
    double f_lo_hz = 10.0;
    double f_hi_hz = 1e4;
    int points_per_decade = 50;
    bool include_dark_noise = true;
    std::optional<MainsArtifact> mains;
    std::optional<EstimationRipple> ripple;
};

// Source state at a Fourier frequency (Hz).
using SourceModel = std::function<QuadraturePair(double)>;

// Per frequency: detection efficiency on the optical variances, then dark
// noise. Mains lines insert exactly two extra rows at 50 and 100 Hz (when
// inside the band and not already on the grid).
SpectrumSet synthesize_spectrum(const SourceModel& source, const HomodyneParams& h,
                                const SynthesisOptions& opts,
                                Execution exec = Execution::parallel);

}  // namespace sqz
