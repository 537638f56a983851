#pragma once

// Error signals for the four locks of the squeezer (PDH cavity locks, the
// coherent-control pump-phase lock and the homodyne LO-phase lock) and the
// propagation of free-running phase noise through a closed loop into an RMS
// phase jitter.
//
// Sign convention: every error signal has a positive slope through its lock
// point. Traces are normalized to unit peak magnitude when emitted.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqz/cavity.hpp"
#include "sqz/opo.hpp"
#include "sqz/quantum_state.hpp"
#include "sqz/sweep.hpp"

namespace sqz {

struct LoopConfig {
    double unity_gain_frequency = 1.0;  // Hz
    int filter_slope = 1;                // integrator order
    double modulation_frequency = 1.0;   // Hz, modulation or offset frequency
    int demod_harmonic = 1;              // 1 or 2
    std::optional<double> demod_phase;   // rad; unset selects the maximal-slope phase

    // Slopes congruent to 2 mod 4 put a closed-loop pole exactly at the UGF
    // and are rejected.
    void validate() const;
};

struct Demodulation {
    int harmonic = 2;
    double phase = 0.0;  // rad
};

// One optical frequency component relative to the reference carrier.
struct OpticalField {
    double offset_hz = 0.0;
    std::complex<double> amplitude;
};

// Complex amplitude C of the photocurrent term C e^{-i 2 pi f t} + c.c.,
// summed over all field pairs whose beat frequency is f.
std::complex<double> photocurrent_component(std::span<const OpticalField> fields, double beat_hz);

// Mixer output after low-pass: Re{C e^{-i phase}}.
double demodulate(std::complex<double> component, double phase);

// PDH error: 2 J0(b) J1(b) Im{F(D) F*(D + W) - F*(D) F(D - W)}, sign chosen so
// the slope at zero detuning is positive. Requires 0 <= mod_index <= 1.
double pdh_error(const CavityParams& c, double detuning_hz, double mod_freq_hz, double mod_index);

// Coherent-control pump-phase error. A single sideband at +ccb_offset seeds the
// OPO; the idler appears at -ccb_offset. pump_phase is measured in
// fundamental-wave radians (pump field phase = 2 * pump_phase), which makes
// the harmonic-2 error pi-periodic. Zero for x = 0 and for harmonic 1.
double pump_phase_error(const OpoParams& p, double ccb_offset_hz, double pump_phase,
                        const Demodulation& demod);

// Demodulation phase putting a positive-slope, maximal-slope zero at
// pump_phase = 0 for the harmonic-2 pump-phase error.
double pump_phase_default_demod(const OpoParams& p, double ccb_offset_hz);

// Context of the homodyne LO-phase lock: the control-field sideband amplitude
// reaching the detector, and the LO phase at which the squeezed quadrature is
// read out.
struct LoLockContext {
    QuadraturePair state = QuadraturePair::vacuum();
    double control_amplitude = 1.0;
    double squeeze_angle = 0.0;  // rad
};

// A sin(lo_phase - squeeze_angle + demod_phase). demod_phase = 0 locks to the
// squeezed quadrature, pi/2 to the anti-squeezed one. Throws
// NoDiscriminationError for zero control amplitude.
double lo_phase_error(const LoLockContext& ctx, double ccb_offset_hz, double lo_phase,
                      double demod_phase);

// LO phase of the positive-slope zero, and the variance read out there.
double lo_lock_point(const LoLockContext& ctx, double demod_phase);
double locked_readout_variance(const LoLockContext& ctx, double demod_phase);

// |1 / (1 + G(f))| with G(f) = (UGF / f)^n e^{-i pi n / 2}.
double loop_suppression(const LoopConfig& loop, double f_hz);

// Free-running phase-noise amplitude spectral density, rad/sqrt(Hz).
using PhaseNoiseDensity = std::function<double(double)>;

// Synthetic demo spectrum: white floor with a 1/f power corner,
// S(f) = white * sqrt(1 + corner / f). Not measured data.
struct WhitePlusFlicker {
    double white = 1e-4;       // rad/sqrt(Hz)
    double corner_hz = 100.0;
    double operator()(double f_hz) const;
};

struct JitterIntegration {
    double theta_rms = 0.0;
    int panels = 0;       // log-frequency panels used
    double last_change = 0.0;
};

// theta_rms = sqrt( integral_{f_lo}^{f_hi} (|1/(1+G)| S(f))^2 df ).
// Integrates in u = ln f with 8-point Gauss-Legendre panels, doubling the
// panel count from 16 per decade until the relative change falls below
// 1e-10 (at most 2^18 panels). An empty loop means no feedback.
// Throws std::domain_error for non-finite or non-converging integrands.
JitterIntegration integrate_residual_jitter(const PhaseNoiseDensity& noise,
                                            const std::optional<LoopConfig>& loop, double f_lo_hz,
                                            double f_hi_hz, Execution exec = Execution::parallel);

inline double residual_jitter(const PhaseNoiseDensity& noise, const std::optional<LoopConfig>& loop,
                              double f_lo_hz, double f_hi_hz,
                              Execution exec = Execution::parallel) {
    return integrate_residual_jitter(noise, loop, f_lo_hz, f_hi_hz, exec).theta_rms;
}

struct ErrorSignalTrace {
    std::string sweep_column;  // e.g. "detuning_hz"
    std::vector<double> sweep;
    std::vector<double> error;
    bool discriminating = true;  // false when the trace is identically zero
    bool normalized = false;
};

// Scales the trace to unit peak magnitude. A trace that is identically zero
// is left untouched and marked non-discriminating.
void normalize_peak(ErrorSignalTrace& trace);

ErrorSignalTrace pdh_trace(const CavityParams& c, std::span<const double> detunings_hz,
                           double mod_freq_hz, double mod_index,
                           Execution exec = Execution::parallel);
ErrorSignalTrace pump_phase_trace(const OpoParams& p, double ccb_offset_hz,
                                  std::span<const double> phases, const Demodulation& demod,
                                  Execution exec = Execution::parallel);
ErrorSignalTrace lo_phase_trace(const LoLockContext& ctx, double ccb_offset_hz,
                                std::span<const double> phases, double demod_phase,
                                Execution exec = Execution::parallel);

// Indices i where error changes sign between sweep[i] and sweep[i+1], or hits
// zero exactly at sweep[i]; `rising` selects positive-slope crossings.
std::vector<std::size_t> zero_crossings(const ErrorSignalTrace& trace, bool rising);

}  // namespace sqz
