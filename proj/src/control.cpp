#include "sqz/control.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Relative tolerance for matching beat frequencies.
constexpr double kBeatMatchTolerance = 1e-9;

// 8-point Gauss-Legendre on [-1, 1], symmetric half.
constexpr std::array<double, 4> kGaussNodes = {0.1834346424956498, 0.5255324099163290,
                                               0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGaussWeights = {0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};

}  // namespace

void LoopConfig::validate() const {
    if (!(unity_gain_frequency > 0.0)) throw std::invalid_argument("unity gain frequency must be positive");
    if (!(modulation_frequency > 0.0)) throw std::invalid_argument("modulation frequency must be positive");
    if (filter_slope < 1) throw std::invalid_argument("filter slope must be >= 1");
    if (filter_slope % 4 == 2) {
        throw std::invalid_argument("filter slope = 2 (mod 4) has a closed-loop pole at the unity gain frequency");
    }
    if (demod_harmonic != 1 && demod_harmonic != 2) {
        throw std::invalid_argument("demodulation harmonic must be 1 or 2");
    }
}

std::complex<double> photocurrent_component(std::span<const OpticalField> fields, double beat_hz) {
    double scale = std::abs(beat_hz);
    for (const auto& f : fields) scale = std::max(scale, std::abs(f.offset_hz));
    const double tol = kBeatMatchTolerance * std::max(scale, 1.0);

    std::complex<double> sum{0.0, 0.0};
    for (const auto& a : fields) {
        for (const auto& b : fields) {
            if (std::abs((a.offset_hz - b.offset_hz) - beat_hz) <= tol) {
                sum += a.amplitude * std::conj(b.amplitude);
            }
        }
    }
    return sum;
}

double demodulate(std::complex<double> component, double phase) {
    return std::real(component * std::polar(1.0, -phase));
}

double pdh_error(const CavityParams& c, double detuning_hz, double mod_freq_hz, double mod_index) {
    if (!(mod_index >= 0.0 && mod_index <= 1.0)) {
        throw std::invalid_argument("PDH modulation index must lie in [0, 1]");
    }
    if (!(mod_freq_hz > 0.0)) throw std::invalid_argument("PDH modulation frequency must be positive");
    const auto carrier = response(c, detuning_hz).reflection;
    const auto upper = response(c, detuning_hz + mod_freq_hz).reflection;
    const auto lower = response(c, detuning_hz - mod_freq_hz).reflection;
    const double bessel = 2.0 * std::cyl_bessel_j(0.0, mod_index) * std::cyl_bessel_j(1.0, mod_index);
    // Im F rises through resonance for any coupling with this reflection
    // convention, so the raw PDH combination falls; flip it.
    return -bessel * std::imag(carrier * std::conj(upper) - std::conj(carrier) * lower);
}

namespace {

std::array<OpticalField, 2> pump_lock_fields(const OpoParams& p, double ccb_offset_hz,
                                             double pump_phase) {
    const double omega = kTwoPi * ccb_offset_hz;
    const auto seed = seed_response(p, omega, 2.0 * pump_phase);
    return {OpticalField{ccb_offset_hz, seed.signal}, OpticalField{-ccb_offset_hz, seed.idler}};
}

}  // namespace

double pump_phase_error(const OpoParams& p, double ccb_offset_hz, double pump_phase,
                        const Demodulation& demod) {
    if (!(ccb_offset_hz > 0.0)) throw std::invalid_argument("control beam offset must be positive");
    if (demod.harmonic != 1 && demod.harmonic != 2) {
        throw std::invalid_argument("demodulation harmonic must be 1 or 2");
    }
    const auto fields = pump_lock_fields(p, ccb_offset_hz, pump_phase);
    const auto component = photocurrent_component(fields, demod.harmonic * ccb_offset_hz);
    return demodulate(component, demod.phase);
}

double pump_phase_default_demod(const OpoParams& p, double ccb_offset_hz) {
    // error(theta) = |C0| cos(arg C0 - 2 theta - psi); psi = arg C0 - pi/2
    // turns that into |C0| sin(2 theta).
    const auto fields = pump_lock_fields(p, ccb_offset_hz, 0.0);
    const auto c0 = photocurrent_component(fields, 2.0 * ccb_offset_hz);
    return std::arg(c0) - std::numbers::pi / 2.0;
}

double lo_phase_error(const LoLockContext& ctx, double ccb_offset_hz, double lo_phase,
                      double demod_phase) {
    if (!(ccb_offset_hz > 0.0)) throw std::invalid_argument("control beam offset must be positive");
    if (!(ctx.control_amplitude > 0.0)) {
        throw NoDiscriminationError("LO-phase lock has no control field at the homodyne detector");
    }
    return ctx.control_amplitude * std::sin(lo_phase - ctx.squeeze_angle + demod_phase);
}

double lo_lock_point(const LoLockContext& ctx, double demod_phase) {
    const double raw = ctx.squeeze_angle - demod_phase;
    return raw - kTwoPi * std::floor(raw / kTwoPi);
}

double locked_readout_variance(const LoLockContext& ctx, double demod_phase) {
    return project_quadrature(ctx.state, lo_lock_point(ctx, demod_phase) - ctx.squeeze_angle);
}

double loop_suppression(const LoopConfig& loop, double f_hz) {
    loop.validate();
    if (!(f_hz > 0.0)) throw std::invalid_argument("loop frequency must be positive");
    const double magnitude = std::pow(loop.unity_gain_frequency / f_hz, loop.filter_slope);
    const auto open_loop = std::polar(magnitude, -std::numbers::pi * loop.filter_slope / 2.0);
    return 1.0 / std::abs(1.0 + open_loop);
}

double WhitePlusFlicker::operator()(double f_hz) const {
    return white * std::sqrt(1.0 + corner_hz / f_hz);
}

JitterIntegration integrate_residual_jitter(const PhaseNoiseDensity& noise,
                                            const std::optional<LoopConfig>& loop, double f_lo_hz,
                                            double f_hi_hz, Execution exec) {
    if (!(f_lo_hz > 0.0) || !(f_hi_hz > f_lo_hz)) {
        throw std::invalid_argument("jitter band must satisfy 0 < f_lo < f_hi");
    }
    if (loop) loop->validate();

    auto integrand = [&](double u) {
        const double f = std::exp(u);
        const double s = noise(f) * (loop ? loop_suppression(*loop, f) : 1.0);
        return s * s * f;  // df = f du
    };

    const double u_lo = std::log(f_lo_hz);
    const double u_hi = std::log(f_hi_hz);
    const double decades = std::log10(f_hi_hz / f_lo_hz);
    int panels = std::max(4, static_cast<int>(std::ceil(16.0 * decades)));
    constexpr int kMaxPanels = 1 << 18;

    auto integrate = [&](int n) {
        const double width = (u_hi - u_lo) / n;
        std::vector<double> starts(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) starts[static_cast<std::size_t>(i)] = u_lo + width * i;
        const auto parts = map_grid(starts, [&](double a) {
            const double mid = a + 0.5 * width;
            const double half = 0.5 * width;
            double acc = 0.0;
            for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
                acc += kGaussWeights[k] *
                       (integrand(mid - half * kGaussNodes[k]) + integrand(mid + half * kGaussNodes[k]));
            }
            return acc * half;
        }, exec);
        double total = 0.0;
        for (const double v : parts) total += v;
        if (!std::isfinite(total)) throw std::domain_error("phase-noise model is not integrable over the band");
        return total;
    };

    double previous = integrate(panels);
    while (true) {
        if (panels >= kMaxPanels) {
            throw std::domain_error("phase-noise integral did not converge");
        }
        panels *= 2;
        const double current = integrate(panels);
        const double change = current == 0.0 ? std::abs(current - previous)
                                             : std::abs(current - previous) / std::abs(current);
        if (change < 1e-10) {
            return JitterIntegration{std::sqrt(current), panels, change};
        }
        previous = current;
    }
}

void normalize_peak(ErrorSignalTrace& trace) {
    double peak = 0.0;
    for (const double e : trace.error) peak = std::max(peak, std::abs(e));
    if (peak == 0.0) {
        trace.discriminating = false;
        return;
    }
    for (double& e : trace.error) e /= peak;
    trace.normalized = true;
}

ErrorSignalTrace pdh_trace(const CavityParams& c, std::span<const double> detunings_hz,
                           double mod_freq_hz, double mod_index, Execution exec) {
    // Throws on bad inputs here, outside the parallel region.
    pdh_error(c, 0.0, mod_freq_hz, mod_index);
    ErrorSignalTrace trace;
    trace.sweep_column = "detuning_hz";
    trace.sweep.assign(detunings_hz.begin(), detunings_hz.end());
    trace.error = map_grid(detunings_hz, [&](double d) { return pdh_error(c, d, mod_freq_hz, mod_index); }, exec);
    return trace;
}

ErrorSignalTrace pump_phase_trace(const OpoParams& p, double ccb_offset_hz,
                                  std::span<const double> phases, const Demodulation& demod,
                                  Execution exec) {
    pump_phase_error(p, ccb_offset_hz, 0.0, demod);
    ErrorSignalTrace trace;
    trace.sweep_column = "pump_phase_rad";
    trace.sweep.assign(phases.begin(), phases.end());
    trace.error = map_grid(phases, [&](double ph) { return pump_phase_error(p, ccb_offset_hz, ph, demod); }, exec);
    return trace;
}

ErrorSignalTrace lo_phase_trace(const LoLockContext& ctx, double ccb_offset_hz,
                                std::span<const double> phases, double demod_phase, Execution exec) {
    lo_phase_error(ctx, ccb_offset_hz, 0.0, demod_phase);
    ErrorSignalTrace trace;
    trace.sweep_column = "lo_phase_rad";
    trace.sweep.assign(phases.begin(), phases.end());
    trace.error = map_grid(phases, [&](double ph) { return lo_phase_error(ctx, ccb_offset_hz, ph, demod_phase); }, exec);
    return trace;
}

std::vector<std::size_t> zero_crossings(const ErrorSignalTrace& trace, bool rising) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i + 1 < trace.error.size(); ++i) {
        const double a = trace.error[i];
        const double b = trace.error[i + 1];
        if (rising ? (a < 0.0 && b >= 0.0) : (a > 0.0 && b <= 0.0)) out.push_back(i);
    }
    return out;
}

}  // namespace sqz
