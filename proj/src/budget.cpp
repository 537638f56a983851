#include "sqz/budget.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

struct Variances {
    double sq;
    double anti;
};

Variances checked_levels(double sq_db, double anti_db) {
    if (!std::isfinite(sq_db) || !std::isfinite(anti_db)) {
        throw std::invalid_argument("levels must be finite");
    }
    if (sq_db > 0.0 || anti_db < 0.0) {
        throw std::invalid_argument("expected a squeezed level <= 0 dB and an anti-squeezed level >= 0 dB");
    }
    if (sq_db == 0.0 && anti_db == 0.0) {
        throw DegenerateFitError("vacuum pair: source strength is zero and efficiency is unconstrained");
    }
    if (sq_db == 0.0 || anti_db == 0.0) {
        throw DegenerateFitError("one quadrature at shot noise implies zero efficiency");
    }
    const Variances v{db_to_variance(sq_db), db_to_variance(anti_db)};
    if (v.sq * v.anti < 1.0 - kUncertaintyTolerance) {
        throw NonphysicalPairError("squeezing/anti-squeezing pair violates the uncertainty bound (product " +
                                   std::to_string(v.sq * v.anti) + " < 1)");
    }
    return v;
}

// Values within the uncertainty tolerance above 1 come from rounding of pure pairs.
double clamp_efficiency(double eta) {
    if (!(eta > 0.0)) throw DegenerateFitError("fitted efficiency is not positive");
    return std::min(eta, 1.0);
}

double relative_mismatch(const QuadraturePair& model, const Variances& measured) {
    return std::max(std::abs(model.squeezed() - measured.sq) / measured.sq,
                    std::abs(model.anti_squeezed() - measured.anti) / measured.anti);
}

}  // namespace

QuadraturePair fitted_state(const FitResult& f) {
    const double e = f.eta.value();
    if (f.model == FitModel::pure_state) {
        return apply_loss(QuadraturePair::pure(f.strength), f.eta);
    }
    const double x = f.strength;
    return QuadraturePair(1.0 - e * 4.0 * x / ((1.0 + x) * (1.0 + x)),
                          1.0 + e * 4.0 * x / ((1.0 - x) * (1.0 - x)));
}

FitResult fit_eta_r(double sq_db, double anti_db) {
    const Variances v = checked_levels(sq_db, anti_db);
    // eta^2 = (eta - (1 - Vs)) (eta + (Va - 1)) is linear in eta.
    const double eta = clamp_efficiency((1.0 - v.sq) * (v.anti - 1.0) / (v.anti + v.sq - 2.0));
    const double anti_pure = (v.anti - 1.0 + eta) / eta;  // e^{2r}
    FitResult out;
    out.eta = Efficiency(eta);
    out.strength = 0.5 * std::log(anti_pure);
    out.model = FitModel::pure_state;
    out.residual = relative_mismatch(fitted_state(out), v);
    return out;
}

FitResult fit_eta_x(double sq_db, double anti_db) {
    const Variances v = checked_levels(sq_db, anti_db);
    const double ratio = (1.0 - v.sq) / (v.anti - 1.0);
    const double root = std::sqrt(ratio);
    const double x = (1.0 - root) / (1.0 + root);
    if (!(x > 0.0)) {
        // ratio >= 1 means Va + Vs <= 2, already rejected by the uncertainty check
        throw NonphysicalPairError("pair implies a non-positive pump amplitude");
    }
    const double eta = clamp_efficiency((1.0 - v.sq) * (1.0 + x) * (1.0 + x) / (4.0 * x));
    FitResult out;
    out.eta = Efficiency(eta);
    out.strength = x;
    out.model = FitModel::opo;
    out.residual = relative_mismatch(fitted_state(out), v);
    return out;
}

LevelPair forward_pure_state(Efficiency eta, double r) {
    const auto q = apply_loss(QuadraturePair::pure(r), eta);
    return {variance_to_db(q.squeezed()).db, variance_to_db(q.anti_squeezed()).db};
}

LevelPair forward_opo(Efficiency eta, double x) {
    if (!(x >= 0.0 && x < 1.0)) throw std::invalid_argument("x must lie in [0, 1)");
    const FitResult f{eta, x, FitModel::opo, 0.0};
    const auto q = fitted_state(f);
    return {variance_to_db(q.squeezed()).db, variance_to_db(q.anti_squeezed()).db};
}

LossBudget LossBudget::geo600_illustrative() {
    return LossBudget({
        {"mode_matching_src", Efficiency(0.95)},
        {"faraday_isolator", Efficiency(0.98)},
        {"dielectric_coatings", Efficiency(0.99)},
        {"photodiode_qe", Efficiency(0.97)},
    });
}

Efficiency LossBudget::total() const {
    std::vector<Efficiency> chain;
    chain.reserve(entries_.size());
    for (const auto& e : entries_) chain.push_back(e.eta);
    return compose_efficiencies(chain);
}

FitResult remove_detector(const FitResult& f, Efficiency eta_bhd) {
    if (!(eta_bhd.value() > 0.0)) throw InconsistentBudgetError("detector efficiency must be positive");
    if (eta_bhd.value() < f.eta.value() * (1.0 - kUncertaintyTolerance)) {
        throw InconsistentBudgetError("detector efficiency exceeds the fitted total loss");
    }
    FitResult out = f;
    out.eta = Efficiency(std::min(1.0, f.eta.value() / eta_bhd.value()));
    return out;
}

DecibelLevel project_injected(const FitResult& f, Efficiency eta_bhd) {
    return variance_to_db(fitted_state(remove_detector(f, eta_bhd)).squeezed());
}

DecibelLevel project_detector(const FitResult& injected, const LossBudget& extra) {
    return variance_to_db(apply_loss(fitted_state(injected).squeezed(), extra.total()));
}

DecibelLevel project_detector(DecibelLevel injected_sq, const LossBudget& extra) {
    return variance_to_db(apply_loss(db_to_variance(injected_sq), extra.total()));
}

double equivalent_power_factor(double improvement_db) {
    if (!(improvement_db >= 0.0)) throw std::domain_error("improvement must be >= 0 dB");
    return std::pow(10.0, improvement_db / 10.0);
}

}  // namespace sqz
