#include "sqz/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sqz {

Efficiency::Efficiency(double eta) : eta_(eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::domain_error("efficiency must lie in [0, 1], got " + std::to_string(eta));
    }
}

QuadraturePair::QuadraturePair(double v_a, double v_b, std::optional<double> frequency_hz)
    : v_sq_(std::min(v_a, v_b)), v_anti_(std::max(v_a, v_b)), frequency_(frequency_hz) {
    if (!(v_sq_ > 0.0) || !std::isfinite(v_anti_)) {
        throw std::domain_error("quadrature variances must be positive and finite");
    }
}

QuadraturePair QuadraturePair::pure(double squeeze_factor) {
    return QuadraturePair(std::exp(-2.0 * squeeze_factor), std::exp(2.0 * squeeze_factor));
}

DecibelLevel variance_to_db(double variance) {
    if (!(variance > 0.0)) {
        throw std::domain_error("variance must be positive to express in dB");
    }
    return DecibelLevel{10.0 * std::log10(variance)};
}

double db_to_variance(DecibelLevel level) {
    if (!std::isfinite(level.db)) {
        throw std::domain_error("dB level must be finite");
    }
    return std::pow(10.0, level.db / 10.0);
}

double apply_loss(double variance, Efficiency eta) {
    const double e = eta.value();
    return e * variance + (1.0 - e);
}

QuadraturePair apply_loss(const QuadraturePair& q, Efficiency eta) {
    return QuadraturePair(apply_loss(q.squeezed(), eta), apply_loss(q.anti_squeezed(), eta),
                          q.frequency());
}

Efficiency compose_efficiencies(std::span<const Efficiency> chain) {
    if (chain.empty()) {
        throw std::domain_error("cannot compose an empty efficiency chain");
    }
    double product = 1.0;
    for (const auto e : chain) {
        product *= e.value();
    }
    return Efficiency(product);
}

double project_quadrature(const QuadraturePair& q, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return q.squeezed() * c * c + q.anti_squeezed() * s * s;
}

QuadraturePair apply_phase_jitter(const QuadraturePair& q, double theta_rms) {
    if (!(theta_rms >= 0.0)) {
        throw std::domain_error("phase jitter RMS must be non-negative");
    }
    // <cos^2> and <sin^2> of a Gaussian angle; -expm1 keeps small jitter exact.
    const double mixed = -std::expm1(-2.0 * theta_rms * theta_rms) / 2.0;
    const double kept = 1.0 - mixed;
    const double v_sq = q.squeezed() * kept + q.anti_squeezed() * mixed;
    const double v_anti = q.anti_squeezed() * kept + q.squeezed() * mixed;
    return QuadraturePair(v_sq, v_anti, q.frequency());
}

}  // namespace sqz
