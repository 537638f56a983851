#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "sqz/detection.hpp"
#include "sqz/errors.hpp"
#include "sqz/opo.hpp"

using namespace sqz;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

HomodyneParams ideal() { return HomodyneParams{500e-6, 1.0, 1.0, kInf}; }

}  // namespace

TEST_CASE("detection efficiency") {
    CHECK(detection_efficiency(ideal()).value() == 1.0);
    CHECK(detection_efficiency({500e-6, 0.986, 0.977, 17.0}).value() == doctest::Approx(0.950).epsilon(1e-3));
    CHECK(detection_efficiency({500e-6, 0.986, 1.0, 17.0}).value() == doctest::Approx(0.972196));
    CHECK(detection_efficiency(HomodyneParams{}).value() == doctest::Approx(0.95).epsilon(1e-14));
    CHECK_THROWS(detection_efficiency({500e-6, 1.1, 1.0, 17.0}));
    CHECK_THROWS(detection_efficiency({0.0, 0.9, 1.0, 17.0}));
}

TEST_CASE("dark noise") {
    CHECK(add_dark_noise(0.3, kInf) == 0.3);
    CHECK(add_dark_noise(1.0, 17.0) == doctest::Approx(1.0200).epsilon(1e-4));
    CHECK(10 * std::log10(add_dark_noise(1.0, 17.0)) == doctest::Approx(0.086).epsilon(5e-3));
    CHECK(add_dark_noise(0.1259, 17.0) == doctest::Approx(0.1459).epsilon(1e-3));
    CHECK(10 * std::log10(add_dark_noise(0.1259, 17.0)) == doctest::Approx(-8.36).epsilon(1e-3));

    for (double v = 0.01; v < 30.0; v *= 1.7) {
        CHECK(add_dark_noise(v, 17.0) > v);
        // two independent additions equal one addition of the summed power
        const double both = add_dark_noise(add_dark_noise(v, 17.0), 20.0);
        const double combined = -10 * std::log10(std::pow(10.0, -1.7) + std::pow(10.0, -2.0));
        CHECK(both == doctest::Approx(add_dark_noise(v, combined)).epsilon(1e-14));
    }

    // -9 dB read against the dark-noise inflated shot trace
    const double optical = remove_dark_noise(std::pow(10.0, -0.9), 17.0);
    CHECK(10 * std::log10(optical) == doctest::Approx(-9.6476).epsilon(1e-4));
    CHECK((optical + std::pow(10.0, -1.7)) / (1 + std::pow(10.0, -1.7)) == doctest::Approx(std::pow(10.0, -0.9)));
    CHECK_THROWS_AS(remove_dark_noise(0.01, 17.0), NonphysicalPairError);
    CHECK_THROWS_AS(add_dark_noise(0.0, 17.0), std::domain_error);
}

TEST_CASE("order contract: optical loss before electronic noise") {
    const HomodyneParams h{500e-6, 0.986, 0.977, 17.0};
    const QuadraturePair src(0.05, 30.0);
    SynthesisOptions opts{10.0, 1e4, 10, true, std::nullopt, std::nullopt};
    const auto set = synthesize_spectrum([&](double) { return src; }, h, opts, Execution::serial);
    const double eta = 0.986 * 0.986 * 0.977;
    const double expected = 0.05 * eta + (1.0 - eta) + std::pow(10.0, -1.7);
    for (const auto& p : set.squeezed.points) {
        CHECK(p.level_db == doctest::Approx(10 * std::log10(expected)).epsilon(1e-12));
    }
    // The wrong order would give a visibly different level.
    const double wrong = (0.05 + std::pow(10.0, -1.7)) * eta + (1.0 - eta);
    CHECK(std::abs(10 * std::log10(wrong) - set.squeezed.points.front().level_db) > 0.01);
}

TEST_CASE("synthesized spectra") {
    SynthesisOptions opts;
    opts.include_dark_noise = false;
    const auto vac = synthesize_spectrum([](double f) { return QuadraturePair::vacuum(f); }, HomodyneParams{}, opts);
    REQUIRE(vac.shot.points.size() == 151);
    for (std::size_t i = 0; i < vac.shot.points.size(); ++i) {
        CHECK(vac.shot.points[i].level_db == 0.0);
        CHECK(vac.squeezed.points[i].level_db == doctest::Approx(0.0).scale(1.0));
        CHECK(vac.anti_squeezed.points[i].level_db == doctest::Approx(0.0).scale(1.0));
    }

    // Shot trace with 17 dB clearance
    opts.include_dark_noise = true;
    const auto with_dark = synthesize_spectrum([](double f) { return QuadraturePair::vacuum(f); }, HomodyneParams{}, opts);
    for (const auto& p : with_dark.shot.points) {
        CHECK(std::abs(p.level_db - 10 * std::log10(1 + std::pow(10.0, -1.7))) < 1e-12);
        CHECK(std::abs(p.level_db - 0.0858) < 1e-4);
    }

    // Frequencies strictly increasing
    for (std::size_t i = 1; i < with_dark.shot.points.size(); ++i) {
        CHECK(with_dark.shot.points[i].frequency_hz > with_dark.shot.points[i - 1].frequency_hz);
    }
}

TEST_CASE("mains artifacts") {
    SynthesisOptions opts;
    opts.mains = MainsArtifact{12.0};
    const auto set = synthesize_spectrum([](double f) { return QuadraturePair(0.2, 5.0, f); }, HomodyneParams{}, opts);
    // 100 Hz already lies on the 50/decade grid; only 50 Hz adds a row.
    CHECK(set.shot.points.size() == 152);
    CHECK(set.squeezed.artifacts.size() == 2);
    int peaks = 0;
    for (std::size_t i = 0; i < set.squeezed.points.size(); ++i) {
        const double f = set.squeezed.points[i].frequency_hz;
        if (f == 50.0 || f == 100.0) {
            ++peaks;
            CHECK(set.squeezed.points[i].level_db > set.squeezed.points[i - 1].level_db + 5.0);
        }
    }
    CHECK(peaks == 2);
}

TEST_CASE("ripple is seeded and flagged") {
    SynthesisOptions opts;
    opts.ripple = EstimationRipple{0.2, 42};
    const auto src = [](double f) { return QuadraturePair(0.2, 5.0, f); };
    const auto a = synthesize_spectrum(src, HomodyneParams{}, opts);
    const auto b = synthesize_spectrum(src, HomodyneParams{}, opts, Execution::serial);
    REQUIRE(a.squeezed.points.size() == b.squeezed.points.size());
    for (std::size_t i = 0; i < a.squeezed.points.size(); ++i) {
        CHECK(a.squeezed.points[i].level_db == b.squeezed.points[i].level_db);
    }
    CHECK(a.anti_squeezed.artifacts.size() == 1);
}
