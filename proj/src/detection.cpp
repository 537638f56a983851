#include "sqz/detection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

constexpr std::array<double, 2> kMainsLinesHz = {50.0, 100.0};

double dark_power(double clearance_db) {
    if (std::isinf(clearance_db) && clearance_db > 0.0) return 0.0;
    if (!std::isfinite(clearance_db)) throw std::domain_error("dark-noise clearance must be finite or +inf");
    return std::pow(10.0, -clearance_db / 10.0);
}

struct Row {
    double shot;
    double sq;
    double anti;
};

}  // namespace

void HomodyneParams::validate() const {
    if (!(lo_power_w > 0.0)) throw std::invalid_argument("LO power must be positive");
    if (!(visibility >= 0.0 && visibility <= 1.0)) throw std::invalid_argument("visibility must lie in [0, 1]");
    if (!(pd_quantum_efficiency >= 0.0 && pd_quantum_efficiency <= 1.0)) {
        throw std::invalid_argument("photodiode quantum efficiency must lie in [0, 1]");
    }
    if (std::isnan(dark_clearance_db) || dark_clearance_db == -INFINITY) {
        throw std::invalid_argument("dark-noise clearance must be finite or +inf");
    }
}

Efficiency detection_efficiency(const HomodyneParams& h) {
    h.validate();
    return Efficiency(h.visibility * h.visibility * h.pd_quantum_efficiency);
}

double add_dark_noise(double variance, double clearance_db) {
    if (!(variance > 0.0)) throw std::domain_error("variance must be positive");
    return variance + dark_power(clearance_db);
}

double remove_dark_noise(double apparent_rel_shot, double clearance_db) {
    if (!(apparent_rel_shot > 0.0)) throw std::domain_error("apparent variance must be positive");
    const double d = dark_power(clearance_db);
    const double optical = apparent_rel_shot * (1.0 + d) - d;
    if (!(optical > 0.0)) {
        throw NonphysicalPairError("apparent level lies below the electronic dark-noise floor");
    }
    return optical;
}

SpectrumSet synthesize_spectrum(const SourceModel& source, const HomodyneParams& h,
                                const SynthesisOptions& opts, Execution exec) {
    const Efficiency eta = detection_efficiency(h);
    const double dark = opts.include_dark_noise ? dark_power(h.dark_clearance_db) : 0.0;

    std::vector<double> grid = log_grid(opts.f_lo_hz, opts.f_hi_hz, opts.points_per_decade);
    std::vector<double> mains_rows;
    if (opts.mains) {
        for (const double line : kMainsLinesHz) {
            if (line < opts.f_lo_hz || line > opts.f_hi_hz) continue;
            mains_rows.push_back(line);
            if (!std::binary_search(grid.begin(), grid.end(), line)) {
                grid.insert(std::lower_bound(grid.begin(), grid.end(), line), line);
            }
        }
    }

    // Validate the source once before fanning out.
    (void)source(grid.front());

    auto rows = map_grid(grid, [&](double f) {
        const QuadraturePair q = apply_loss(source(f), eta);
        return Row{1.0 + dark, q.squeezed() + dark, q.anti_squeezed() + dark};
    }, exec);

    if (opts.mains) {
        const double pickup = std::pow(10.0, opts.mains->level_above_shot_db / 10.0);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (std::find(mains_rows.begin(), mains_rows.end(), grid[i]) == mains_rows.end()) continue;
            rows[i].shot += pickup;
            rows[i].sq += pickup;
            rows[i].anti += pickup;
        }
    }

    SpectrumSet out;
    out.shot.label = "shot";
    out.squeezed.label = "squeezed";
    out.anti_squeezed.label = "anti_squeezed";
    for (auto* t : {&out.shot, &out.squeezed, &out.anti_squeezed}) {
        t->points_per_decade = opts.points_per_decade;
        t->points.reserve(grid.size());
        if (opts.mains) {
            for (const double line : mains_rows) {
                t->artifacts.push_back("synthetic mains peak at " + std::to_string(static_cast<int>(line)) + " Hz");
            }
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.shot.points.push_back({grid[i], variance_to_db(rows[i].shot).db});
        out.squeezed.points.push_back({grid[i], variance_to_db(rows[i].sq).db});
        out.anti_squeezed.points.push_back({grid[i], variance_to_db(rows[i].anti).db});
    }

    if (opts.ripple) {
        std::mt19937_64 rng(opts.ripple->seed);
        std::normal_distribution<double> jitter(0.0, opts.ripple->rms_db);
        for (auto* t : {&out.shot, &out.squeezed, &out.anti_squeezed}) {
            for (auto& p : t->points) p.level_db += jitter(rng);
            t->artifacts.push_back("synthetic estimation ripple, rms " + std::to_string(opts.ripple->rms_db) + " dB");
        }
    }
    return out;
}

}  // namespace sqz
