#pragma once

// Quadrature-variance algebra in shot-noise units (vacuum variance = 1).
// Everything downstream works on linear variances; decibels only appear at
// the I/O boundary.

#include <optional>
#include <span>

namespace sqz {

// Relative uncertainty-product slack allowed in assertions.
inline constexpr double kUncertaintyTolerance = 1e-9;

class Efficiency {
public:
    // Throws std::domain_error outside [0, 1].
    explicit Efficiency(double eta);

    static Efficiency from_loss(double loss) { return Efficiency(1.0 - loss); }

    double value() const noexcept { return eta_; }
    double loss() const noexcept { return 1.0 - eta_; }

    friend bool operator==(Efficiency, Efficiency) = default;

private:
    double eta_;
};

struct DecibelLevel {
    double db = 0.0;

    friend bool operator==(DecibelLevel, DecibelLevel) = default;
};

// Squeezed/anti-squeezed variance pair. The constructor orders the two so that
// squeezed() <= anti_squeezed() always holds.
class QuadraturePair {
public:
    QuadraturePair(double v_a, double v_b, std::optional<double> frequency_hz = std::nullopt);

    static QuadraturePair vacuum(std::optional<double> frequency_hz = std::nullopt) {
        return QuadraturePair(1.0, 1.0, frequency_hz);
    }
    // Minimum-uncertainty state with squeeze factor r: (e^{-2r}, e^{2r}).
    static QuadraturePair pure(double squeeze_factor);

    double squeezed() const noexcept { return v_sq_; }
    double anti_squeezed() const noexcept { return v_anti_; }
    std::optional<double> frequency() const noexcept { return frequency_; }
    double uncertainty_product() const noexcept { return v_sq_ * v_anti_; }

private:
    double v_sq_;
    double v_anti_;
    std::optional<double> frequency_;
};

DecibelLevel variance_to_db(double variance);
double db_to_variance(DecibelLevel level);
inline double db_to_variance(double db) { return db_to_variance(DecibelLevel{db}); }

// Beam-splitter loss: v -> eta*v + (1 - eta), the open port contributing vacuum.
double apply_loss(double variance, Efficiency eta);
QuadraturePair apply_loss(const QuadraturePair& q, Efficiency eta);

// Product of serial efficiencies. Throws std::domain_error on an empty list.
Efficiency compose_efficiencies(std::span<const Efficiency> chain);

// Variance read out at angle theta from the squeezed quadrature.
double project_quadrature(const QuadraturePair& q, double theta);

// Expectation of project_quadrature over a zero-mean Gaussian angle error of
// standard deviation theta_rms around each principal quadrature:
//   v'_sq = v_sq (1 + e^{-2s^2})/2 + v_anti (1 - e^{-2s^2})/2
// and symmetrically for v'_anti.
QuadraturePair apply_phase_jitter(const QuadraturePair& q, double theta_rms);

}  // namespace sqz
