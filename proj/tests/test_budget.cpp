#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sqz/budget.hpp"
#include "sqz/errors.hpp"

using namespace sqz;

namespace {

// Brute-force oracle for (eta, r): nested grid refinement on the squared
// dB mismatch, independent of the closed form.
std::pair<double, double> grid_fit_eta_r(double sq_db, double anti_db) {
    auto cost = [&](double eta, double r) {
        const double vs = eta * std::exp(-2 * r) + 1 - eta;
        const double va = eta * std::exp(2 * r) + 1 - eta;
        const double a = 10 * std::log10(vs) - sq_db;
        const double b = 10 * std::log10(va) - anti_db;
        return a * a + b * b;
    };
    double eta_lo = 0.01, eta_hi = 1.0, r_lo = 0.0, r_hi = 4.0;
    double best_eta = 0.5, best_r = 1.0;
    for (int level = 0; level < 40; ++level) {
        double best = 1e300;
        const int n = 40;
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; j <= n; ++j) {
                const double e = eta_lo + (eta_hi - eta_lo) * i / n;
                const double r = r_lo + (r_hi - r_lo) * j / n;
                const double c = cost(e, r);
                if (c < best) {
                    best = c;
                    best_eta = e;
                    best_r = r;
                }
            }
        }
        const double de = (eta_hi - eta_lo) / 8;
        const double dr = (r_hi - r_lo) / 8;
        eta_lo = std::max(0.001, best_eta - de);
        eta_hi = std::min(1.0, best_eta + de);
        r_lo = std::max(0.0, best_r - dr);
        r_hi = best_r + dr;
    }
    return {best_eta, best_r};
}

// Bisection oracle for x: eta eliminated through the ratio of the deviations.
double bisect_x(double sq_db, double anti_db) {
    const double vs = std::pow(10.0, sq_db / 10);
    const double va = std::pow(10.0, anti_db / 10);
    auto g = [&](double x) {
        const double eta = (1 - vs) * (1 + x) * (1 + x) / (4 * x);
        return 1 + eta * 4 * x / ((1 - x) * (1 - x)) - va;
    };
    double lo = 1e-9, hi = 1 - 1e-12;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("fit_eta_r on the measured pair") {
    const auto f = fit_eta_r(-9.0, 14.0);
    CHECK(f.eta.value() == doctest::Approx(0.9068).epsilon(5e-4));
    CHECK(f.strength == doctest::Approx(1.659).epsilon(1e-3));
    CHECK(f.residual < 1e-10);
    const auto [eta_grid, r_grid] = grid_fit_eta_r(-9.0, 14.0);
    CHECK(f.eta.value() == doctest::Approx(eta_grid).epsilon(1e-6));
    CHECK(f.strength == doctest::Approx(r_grid).epsilon(1e-6));
    CHECK(f.eta.loss() > 0.085);
    CHECK(f.eta.loss() < 0.105);
}

TEST_CASE("fit_eta_r boundaries and errors") {
    const auto pure = fit_eta_r(-3.0103, 3.0103);
    CHECK(pure.eta.value() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(pure.strength == doctest::Approx(0.3466).epsilon(1e-4));
    CHECK_THROWS_AS(fit_eta_r(-3.0, 2.0), NonphysicalPairError);
    CHECK_THROWS_AS(fit_eta_r(0.0, 0.0), DegenerateFitError);
    CHECK_THROWS_AS(fit_eta_r(0.0, 3.0), DegenerateFitError);
    CHECK_THROWS_AS(fit_eta_r(1.0, 3.0), std::invalid_argument);
}

TEST_CASE("fit_eta_x on the measured pair") {
    const auto f = fit_eta_x(-9.0, 14.0);
    CHECK(f.eta.value() == doctest::Approx(0.9068).epsilon(5e-4));
    CHECK(f.strength == doctest::Approx(0.680).epsilon(2e-3));
    CHECK(f.strength == doctest::Approx(bisect_x(-9.0, 14.0)).epsilon(1e-10));
    CHECK(std::abs(f.eta.value() - fit_eta_r(-9.0, 14.0).eta.value()) < 1e-9);
    CHECK(f.residual < 1e-10);
    CHECK_THROWS_AS(fit_eta_x(0.0, 0.0), DegenerateFitError);
    CHECK_THROWS_AS(fit_eta_x(-3.0, 2.0), NonphysicalPairError);
}

TEST_CASE("both models share eta on any physical pair") {
    for (double sq = -0.5; sq > -15.0; sq -= 0.7) {
        for (double anti = -sq; anti < 25.0; anti += 0.9) {
            const auto r = fit_eta_r(sq, anti);
            const auto x = fit_eta_x(sq, anti);
            CHECK(std::abs(r.eta.value() - x.eta.value()) < 1e-9);
            CHECK(x.strength == doctest::Approx(std::tanh(r.strength / 2)).epsilon(1e-9));
        }
    }
}

TEST_CASE("fit o forward round trip on a 50x50 grid") {
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 50; ++j) {
            const double eta = 0.1 + 0.9 * i / 49.0;
            const double r = 0.05 + 2.45 * j / 49.0;
            const auto levels = forward_pure_state(Efficiency(eta), r);
            const auto f = fit_eta_r(levels.sq_db, levels.anti_db);
            CHECK(f.eta.value() == doctest::Approx(eta).epsilon(1e-9));
            CHECK(f.strength == doctest::Approx(r).epsilon(1e-9));

            const double x = std::tanh(r / 2);
            const auto lx = forward_opo(Efficiency(eta), x);
            const auto fx = fit_eta_x(lx.sq_db, lx.anti_db);
            CHECK(fx.eta.value() == doctest::Approx(eta).epsilon(1e-9));
            CHECK(fx.strength == doctest::Approx(x).epsilon(1e-9));
        }
    }
}

TEST_CASE("project_injected") {
    const auto f = fit_eta_r(-9.0, 14.0);
    CHECK(project_injected(f, Efficiency(0.95)).db == doctest::Approx(-10.975).epsilon(1e-3));
    CHECK(project_injected(f, Efficiency(1.0)).db == doctest::Approx(-9.0).epsilon(1e-9));
    CHECK(project_injected(f, f.eta).db == doctest::Approx(-14.408).epsilon(1e-3));
    CHECK(project_injected(fit_eta_x(-9.0, 14.0), Efficiency(0.95)).db ==
          doctest::Approx(project_injected(f, Efficiency(0.95)).db).epsilon(1e-9));
    CHECK_THROWS_AS(project_injected(f, Efficiency(0.5)), InconsistentBudgetError);
}

TEST_CASE("project_detector") {
    const auto injected = remove_detector(fit_eta_r(-9.0, 14.0), Efficiency(0.95));
    CHECK(project_detector(injected, LossBudget::single("extra", 0.90)).db == doctest::Approx(-7.647).epsilon(1e-3));
    CHECK(project_detector(injected, LossBudget::single("extra", 0.85)).db == doctest::Approx(-6.617).epsilon(1e-3));
    CHECK(project_detector(injected, LossBudget::single("none", 1.0)).db ==
          doctest::Approx(project_injected(fit_eta_r(-9.0, 14.0), Efficiency(0.95)).db));
    const DecibelLevel level = project_injected(fit_eta_r(-9.0, 14.0), Efficiency(0.95));
    CHECK(project_detector(level, LossBudget::single("extra", 0.9)).db ==
          doctest::Approx(project_detector(injected, LossBudget::single("extra", 0.9)).db).epsilon(1e-12));

    double last = -100.0;
    for (double extra = 0.0; extra < 1.0; extra += 0.01) {
        const double db = project_detector(injected, LossBudget::single("extra", 1.0 - extra)).db;
        CHECK(db > last);
        last = db;
    }
    CHECK_THROWS(project_detector(injected, LossBudget{}));
}

TEST_CASE("loss budget composition") {
    auto budget = LossBudget::geo600_illustrative();
    CHECK(budget.total().value() == doctest::Approx(0.8940393).epsilon(1e-9));
    auto entries = budget.entries();
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    do {
        CHECK(LossBudget(entries).total().value() == doctest::Approx(budget.total().value()).epsilon(1e-15));
    } while (std::next_permutation(entries.begin(), entries.end(),
                                   [](const auto& a, const auto& b) { return a.name < b.name; }));
    CHECK_THROWS(LossBudget{}.total());
}

TEST_CASE("equivalent power factor") {
    CHECK(equivalent_power_factor(6.0) == doctest::Approx(3.981).epsilon(1e-3));
    CHECK(equivalent_power_factor(0.0) == 1.0);
    CHECK(equivalent_power_factor(3.0103) == doctest::Approx(2.0).epsilon(1e-4));
    CHECK_THROWS(equivalent_power_factor(-1.0));
}
