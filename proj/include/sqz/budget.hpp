#pragma once

// Inverse problem: recover the overall efficiency and the source strength from
// a measured squeezing / anti-squeezing pair, then project the state forward
// through other loss chains.

#include <string>
#include <vector>

#include "sqz/quantum_state.hpp"

namespace sqz {

enum class FitModel {
    pure_state,  // strength = squeeze factor r
    opo,         // strength = normalized pump x, evaluated at Omega << gamma
};

struct FitResult {
    Efficiency eta{1.0};
    double strength = 0.0;
    FitModel model = FitModel::pure_state;
    double residual = 0.0;  // max relative mismatch of the reproduced variances
};

// Variances the fitted model predicts at the output.
QuadraturePair fitted_state(const FitResult& f);

// (eta, r) such that eta e^{-+2r} + 1 - eta reproduces both levels.
// Closed form: eta = (1 - Vs)(Va - 1) / (Va + Vs - 2).
// Errors: NonphysicalPairError when Vs Va < 1 (eta > 1); DegenerateFitError
// when either level is 0 dB; std::invalid_argument unless sq_db <= 0 <= anti_db.
FitResult fit_eta_r(double sq_db, double anti_db);

// (eta, x) such that 1 -+ eta 4x / (1 +- x)^2 reproduces both levels.
// x follows from the ratio (1 - Vs)/(Va - 1) = ((1 - x)/(1 + x))^2 alone.
FitResult fit_eta_x(double sq_db, double anti_db);

// Forward models, returning (sq_db, anti_db).
struct LevelPair {
    double sq_db = 0.0;
    double anti_db = 0.0;
};
LevelPair forward_pure_state(Efficiency eta, double r);
LevelPair forward_opo(Efficiency eta, double x);

class LossBudget {
public:
    struct Entry {
        std::string name;
        Efficiency eta;
    };

    LossBudget() = default;
    explicit LossBudget(std::vector<Entry> entries) : entries_(std::move(entries)) {}

    // Illustrative split of the 10-15% extra loss expected between the
    // squeezer and the GEO 600 photodiodes. Not measured values.
    static LossBudget geo600_illustrative();
    static LossBudget single(std::string name, double eta) {
        return LossBudget({Entry{std::move(name), Efficiency(eta)}});
    }

    void add(std::string name, double eta) { entries_.push_back({std::move(name), Efficiency(eta)}); }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

    // Product of all entries. Throws std::domain_error on an empty budget.
    Efficiency total() const;

private:
    std::vector<Entry> entries_;
};

// Remove the diagnostic homodyne detector's efficiency from a fitted state:
// eta' = eta / eta_bhd. Throws InconsistentBudgetError if eta_bhd < eta.
FitResult remove_detector(const FitResult& f, Efficiency eta_bhd);

// Squeezed level of the state after the detector efficiency is removed.
DecibelLevel project_injected(const FitResult& f, Efficiency eta_bhd);

// Squeezed level after an additional loss chain.
DecibelLevel project_detector(const FitResult& injected, const LossBudget& extra);
DecibelLevel project_detector(DecibelLevel injected_sq, const LossBudget& extra);

// Laser-power increase giving the same shot-noise improvement: 10^(dB/10).
double equivalent_power_factor(double improvement_db);

}  // namespace sqz
