#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sqz/quantum_state.hpp"

using namespace sqz;

namespace {

// Independent of project_quadrature: direct sampling of the readout angle.
QuadraturePair monte_carlo_jitter(const QuadraturePair& q, double sigma, int samples, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> angle(0.0, sigma);
    double sum_sq = 0.0;
    double sum_anti = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = angle(rng);
        const double c2 = std::cos(t) * std::cos(t);
        const double s2 = 1.0 - c2;
        sum_sq += q.squeezed() * c2 + q.anti_squeezed() * s2;
        sum_anti += q.anti_squeezed() * c2 + q.squeezed() * s2;
    }
    return QuadraturePair(sum_sq / samples, sum_anti / samples);
}

}  // namespace

TEST_CASE("variance_to_db reference levels") {
    CHECK(variance_to_db(1.0).db == doctest::Approx(0.0));
    CHECK(variance_to_db(0.12589).db == doctest::Approx(-9.0).epsilon(1e-4));
    CHECK(variance_to_db(25.119).db == doctest::Approx(14.0).epsilon(1e-4));
    CHECK_THROWS_AS(variance_to_db(0.0), std::domain_error);
    CHECK_THROWS_AS(variance_to_db(-1.0), std::domain_error);
}

TEST_CASE("dB round trip over [1e-6, 1e6]") {
    for (double lg = -6.0; lg <= 6.0; lg += 0.01) {
        const double v = std::pow(10.0, lg);
        CHECK(db_to_variance(variance_to_db(v)) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("QuadraturePair orders its variances") {
    const QuadraturePair q(3.0, 0.5);
    CHECK(q.squeezed() == 0.5);
    CHECK(q.anti_squeezed() == 3.0);
    CHECK_THROWS(QuadraturePair(0.0, 1.0));
    CHECK_THROWS(QuadraturePair(-0.1, 1.0));
}

TEST_CASE("Efficiency bounds") {
    CHECK_NOTHROW(Efficiency(0.0));
    CHECK_NOTHROW(Efficiency(1.0));
    CHECK_THROWS_AS(Efficiency(1.0001), std::domain_error);
    CHECK_THROWS_AS(Efficiency(-0.01), std::domain_error);
}

TEST_CASE("apply_loss examples") {
    const QuadraturePair q(0.5, 2.0);
    auto same = apply_loss(q, Efficiency(1.0));
    CHECK(same.squeezed() == 0.5);
    CHECK(same.anti_squeezed() == 2.0);

    auto vac = apply_loss(q, Efficiency(0.0));
    CHECK(vac.squeezed() == 1.0);
    CHECK(vac.anti_squeezed() == 1.0);

    // The loss model applied to the pure state that reproduces -9/+14 dB.
    auto geo = apply_loss(QuadraturePair(0.03606, 27.59), Efficiency(0.9068));
    CHECK(geo.squeezed() == doctest::Approx(0.1259).epsilon(2e-3));
    CHECK(geo.anti_squeezed() == doctest::Approx(25.12).epsilon(2e-3));
    CHECK(variance_to_db(geo.squeezed()).db == doctest::Approx(-9.0).epsilon(1e-3));
    CHECK(variance_to_db(geo.anti_squeezed()).db == doctest::Approx(14.0).epsilon(1e-3));
}

TEST_CASE("loss pulls every variance toward vacuum") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::exp(8.0 * (u(rng) - 0.5));
        if (v == 1.0) continue;
        double e1 = u(rng);
        double e2 = u(rng);
        if (e2 > e1) std::swap(e1, e2);
        if (e1 == e2) continue;
        const QuadraturePair q(v, 1.0 / v);
        CHECK(std::abs(apply_loss(q, Efficiency(e2)).squeezed() - 1.0) <
              std::abs(apply_loss(q, Efficiency(e1)).squeezed() - 1.0));
    }
}

TEST_CASE("apply_loss composition law") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const QuadraturePair q(std::exp(-4.0 * u(rng)), std::exp(4.0 * u(rng)));
        const Efficiency e1(u(rng));
        const Efficiency e2(u(rng));
        const auto twice = apply_loss(apply_loss(q, e1), e2);
        const auto once = apply_loss(q, Efficiency(e1.value() * e2.value()));
        // Same algebraic value; evaluation order differs only by rounding.
        CHECK(twice.squeezed() == doctest::Approx(once.squeezed()).epsilon(1e-14));
        CHECK(twice.anti_squeezed() == doctest::Approx(once.anti_squeezed()).epsilon(1e-14));
    }
}

TEST_CASE("compose_efficiencies") {
    std::vector<Efficiency> ones{Efficiency(1.0), Efficiency(1.0)};
    CHECK(compose_efficiencies(ones).value() == 1.0);
    std::vector<Efficiency> pair{Efficiency(0.95), Efficiency(0.90)};
    CHECK(compose_efficiencies(pair).value() == doctest::Approx(0.855));
    std::vector<Efficiency> bhd{Efficiency(0.986 * 0.986), Efficiency(0.977)};
    CHECK(compose_efficiencies(bhd).value() == doctest::Approx(0.950).epsilon(1e-3));
    std::vector<Efficiency> reversed{Efficiency(0.90), Efficiency(0.95)};
    CHECK(compose_efficiencies(reversed).value() == compose_efficiencies(pair).value());
    CHECK_THROWS_AS(compose_efficiencies(std::vector<Efficiency>{}), std::domain_error);
}

TEST_CASE("project_quadrature") {
    const QuadraturePair q(0.2, 8.0);
    CHECK(project_quadrature(q, 0.0) == doctest::Approx(0.2));
    CHECK(project_quadrature(q, std::numbers::pi / 2) == doctest::Approx(8.0));
    CHECK(project_quadrature(q, std::numbers::pi / 4) == doctest::Approx(4.1));
}

TEST_CASE("apply_phase_jitter limits and reference value") {
    const QuadraturePair q(0.1259, 25.12);
    auto none = apply_phase_jitter(q, 0.0);
    CHECK(none.squeezed() == q.squeezed());
    CHECK(none.anti_squeezed() == q.anti_squeezed());

    auto wide = apply_phase_jitter(q, 50.0);
    CHECK(wide.squeezed() == doctest::Approx((0.1259 + 25.12) / 2));
    CHECK(wide.anti_squeezed() == doctest::Approx((0.1259 + 25.12) / 2));

    auto ref = apply_phase_jitter(q, 0.030);
    const auto mc = monte_carlo_jitter(q, 0.030, 1'000'000, 3);
    CHECK(ref.squeezed() == doctest::Approx(mc.squeezed()).epsilon(0.01));
    CHECK(ref.squeezed() == doctest::Approx(0.1484).epsilon(1e-3));

    CHECK_THROWS_AS(apply_phase_jitter(q, -1e-3), std::domain_error);
}

TEST_CASE("apply_phase_jitter degrades monotonically") {
    const QuadraturePair q(0.1, 20.0);
    double last = q.squeezed();
    for (double s = 0.005; s < 2.0; s += 0.005) {
        const double v = apply_phase_jitter(q, s).squeezed();
        CHECK(v > last);
        last = v;
    }
}

TEST_CASE("apply_phase_jitter matches Monte Carlo for theta_rms <= 0.3 rad") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 6; ++i) {
        const QuadraturePair q(std::exp(-3.0 * u(rng)), std::exp(3.0 * u(rng)));
        const double sigma = 0.3 * u(rng);
        const auto exact = apply_phase_jitter(q, sigma);
        const auto mc = monte_carlo_jitter(q, sigma, 1'000'000, 100 + i);
        CHECK(exact.squeezed() == doctest::Approx(mc.squeezed()).epsilon(0.01));
        CHECK(exact.anti_squeezed() == doctest::Approx(mc.anti_squeezed()).epsilon(0.01));
    }
}

TEST_CASE("uncertainty product under loss and jitter") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const auto pure = QuadraturePair::pure(3.0 * u(rng));
        const auto lossy = apply_loss(pure, Efficiency(u(rng)));
        const auto jittered = apply_phase_jitter(lossy, u(rng));
        CHECK(lossy.uncertainty_product() >= (1.0 - kUncertaintyTolerance) * pure.uncertainty_product());
        CHECK(jittered.uncertainty_product() >= lossy.uncertainty_product() * (1.0 - kUncertaintyTolerance));
        CHECK(jittered.uncertainty_product() >= 1.0 - kUncertaintyTolerance);
    }
}

TEST_CASE("loss can lower the product of a mixed state, but never below 1") {
    const QuadraturePair mixed(0.5, 10.0);
    const auto after = apply_loss(mixed, Efficiency(0.5));
    CHECK(after.uncertainty_product() < mixed.uncertainty_product());
    CHECK(after.uncertainty_product() >= 1.0);
}
