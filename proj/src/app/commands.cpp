#include "sqz/app/commands.hpp"

#include <cmath>
#include <numbers>

#include "sqz/budget.hpp"
#include "sqz/errors.hpp"

namespace sqz::app {

namespace {

constexpr const char* kTool = "squeezer-sim 0.1.0";

std::string num(double v) { return format_number(v); }
std::string on_off(bool b) { return b ? "on" : "off"; }

std::string geometry_name(CavityGeometry g) {
    return g == CavityGeometry::standing_wave ? "standing" : "ring";
}

std::string segments_text(const std::vector<PathSegment>& segs) {
    std::string s;
    for (const auto& seg : segs) s += (s.empty() ? "" : ", ") + num(seg.length_m) + "@" + num(seg.index);
    return s;
}

OutputFormat format_of(const RunConfig& cfg, const CommonOptions& opts) { return opts.format.value_or(cfg.format); }

Artifact report_artifact(const std::string& stem, const Document& body, const RunConfig& cfg,
                         const CommonOptions& opts) {
    if (format_of(cfg, opts) == OutputFormat::doc) return {stem + ".json", render_doc(body, opts.generated_at)};
    return {stem + ".csv", render_key_values(body, opts.generated_at)};
}

// Source state at Fourier frequency f, before detection.
SourceModel source_model(const RunConfig& cfg) {
    if (!cfg.opo) return [](double f) { return QuadraturePair::vacuum(f); };
    const OpoParams p = cfg.opo_params();
    return [p](double f) {
        auto q = squeezing_spectrum(p, 2.0 * std::numbers::pi * f);
        return QuadraturePair(q.squeezed(), q.anti_squeezed(), f);
    };
}

Document config_echo(const RunConfig& cfg) {
    Document d;
    d["source"] = cfg.source;
    d["scenario"] = cfg.scenario;
    for (const auto& [name, b] : cfg.cavities) {
        Document c;
        if (b.nominal_finesse) {
            c["finesse"] = *b.nominal_finesse;
            c["fwhm_hz"] = *b.nominal_fwhm_hz;
        } else {
            c["r1"] = b.params.r1;
            c["r2"] = b.params.r2;
            c["loss"] = b.params.round_trip_loss;
            c["segments_m_at_index"] = segments_text(b.params.segments);
        }
        c["geometry"] = geometry_name(b.params.geometry);
        d["cavity"][name] = c;
    }
    if (cfg.opo) {
        Document o;
        if (cfg.opo->x) o["x"] = *cfg.opo->x;
        if (cfg.opo->pump_power_w) o["pump_power_w"] = *cfg.opo->pump_power_w;
        if (cfg.opo->threshold_power_w) o["threshold_power_w"] = *cfg.opo->threshold_power_w;
        o["escape_efficiency"] = cfg.opo->escape_efficiency;
        o["cavity"] = cfg.opo->cavity;
        d["opo"] = o;
    }
    d["homodyne"] = {{"lo_power_w", cfg.homodyne.lo_power_w},
                     {"visibility", cfg.homodyne.visibility},
                     {"pd_quantum_efficiency", cfg.homodyne.pd_quantum_efficiency},
                     {"dark_clearance_db", num(cfg.homodyne.dark_clearance_db)}};
    for (const auto& [name, b] : cfg.loops) {
        Document l;
        l["unity_gain_hz"] = b.loop.unity_gain_frequency;
        l["filter_slope"] = b.loop.filter_slope;
        l["modulation_hz"] = b.loop.modulation_frequency;
        l["demod_harmonic"] = b.loop.demod_harmonic;
        if (b.loop.demod_phase) l["demod_phase_rad"] = *b.loop.demod_phase;
        if (!b.cavity.empty()) {
            l["cavity"] = b.cavity;
            l["modulation_index"] = b.modulation_index;
        }
        l["phase_loop"] = b.phase_loop;
        d["loop"][name] = l;
    }
    if (cfg.measurement) {
        d["measurement"] = {{"squeezed_db", cfg.measurement->squeezed_db},
                            {"antisqueezed_db", cfg.measurement->antisqueezed_db},
                            {"dark_corrected", cfg.measurement->dark_corrected}};
    }
    Document budget = Document::object();
    for (const auto& e : cfg.budget.entries()) budget[e.name] = e.eta.value();
    d["budget"] = budget;
    d["projection"]["extra_loss"] = cfg.extra_losses;
    d["noise"] = {{"white_rad_rthz", cfg.noise.density.white},
                  {"corner_hz", cfg.noise.density.corner_hz},
                  {"f_lo_hz", cfg.noise.f_lo_hz},
                  {"f_hi_hz", cfg.noise.f_hi_hz}};
    d["spectrum"] = {{"f_lo_hz", cfg.spectrum.f_lo_hz},
                     {"f_hi_hz", cfg.spectrum.f_hi_hz},
                     {"points_per_decade", cfg.spectrum.points_per_decade},
                     {"dark_noise", on_off(cfg.spectrum.include_dark_noise)},
                     {"mains", on_off(cfg.spectrum.mains.has_value())}};
    return d;
}

Document projection_entry(const FitResult& injected, const LossBudget& chain) {
    Document p;
    const double eta = chain.total().value();
    p["efficiency"] = eta;
    p["loss_percent"] = 100.0 * (1.0 - eta);
    const double detected = project_detector(injected, chain).db;
    p["detected_squeezed_db"] = detected;
    p["detected_antisqueezed_db"] = variance_to_db(apply_loss(fitted_state(injected).anti_squeezed(), Efficiency(eta))).db;
    if (detected <= 0.0) {
        p["improvement_db"] = -detected;
        p["equivalent_power_factor"] = equivalent_power_factor(-detected);
    }
    return p;
}

// Fit of a measured pair, detector removal and projections.
Document fit_document(double sq_db, double anti_db, std::optional<double> clearance_db, Efficiency bhd,
                      const std::vector<double>& extra_losses, const LossBudget& budget,
                      std::vector<std::string>& warnings) {
    Document d;
    d["input"]["squeezed_db"] = sq_db;
    d["input"]["antisqueezed_db"] = anti_db;
    d["input"]["mode"] = clearance_db ? "dark_corrected" : "raw";
    double sq = sq_db;
    double anti = anti_db;
    if (clearance_db) {
        d["input"]["dark_clearance_db"] = *clearance_db;
        sq = variance_to_db(remove_dark_noise(db_to_variance(sq_db), *clearance_db)).db;
        anti = variance_to_db(remove_dark_noise(db_to_variance(anti_db), *clearance_db)).db;
        d["input"]["corrected_squeezed_db"] = sq;
        d["input"]["corrected_antisqueezed_db"] = anti;
    }

    const FitResult fr = fit_eta_r(sq, anti);
    const FitResult fx = fit_eta_x(sq, anti);
    Document fit;
    fit["efficiency"] = fr.eta.value();
    fit["loss_percent"] = 100.0 * fr.eta.loss();
    fit["squeeze_factor_r"] = fr.strength;
    fit["normalized_pump_x"] = fx.strength;
    fit["efficiency_opo_model"] = fx.eta.value();
    fit["residual"] = std::max(fr.residual, fx.residual);
    d["fit"] = fit;

    if (bhd.value() < fr.eta.value()) {
        // A state purer than the detector allows (e.g. a pure pair): nothing
        // to project from.
        d["injected"] = nullptr;
        d["projection"] = nullptr;
        warnings.push_back("detector efficiency " + num(bhd.value()) + " is below the fitted total efficiency " +
                           num(fr.eta.value()) + ": injected state and projection skipped");
        return d;
    }
    const FitResult injected = remove_detector(fr, bhd);
    Document src;
    src["detector_efficiency"] = bhd.value();
    src["efficiency_before_detector"] = injected.eta.value();
    src["injected_squeezed_db"] = project_injected(fr, bhd).db;
    src["injected_antisqueezed_db"] = variance_to_db(fitted_state(injected).anti_squeezed()).db;
    src["lossless_squeezed_db"] = project_injected(fr, fr.eta).db;
    d["injected"] = src;

    if (extra_losses.empty() && budget.empty()) {
        d["projection"] = nullptr;
        warnings.push_back("projection section missing: budget is empty");
        return d;
    }
    Document proj = Document::object();
    for (const double loss : extra_losses) {
        char key[48];
        std::snprintf(key, sizeof key, "extra_loss_%s_percent", num(100.0 * loss).c_str());
        proj[key] = projection_entry(injected, LossBudget::single("extra", 1.0 - loss));
    }
    if (!budget.empty()) {
        Document b = projection_entry(injected, budget);
        for (const auto& e : budget.entries()) b["entries"][e.name] = e.eta.value();
        proj["budget"] = b;
    }
    d["projection"] = proj;
    return d;
}

Document cavity_document(const CavityBlock& b) {
    const CavityParams& c = b.params;
    Document d;
    d["finesse"] = finesse(c);
    d["fsr_hz"] = fsr(c);
    d["fwhm_hz"] = linewidth_fwhm(c);
    d["decay_rate_rad_s"] = decay_rate(c);
    d["round_trip_amplitude"] = c.round_trip_amplitude();
    d["optical_path_m"] = c.optical_path();
    d["geometry"] = geometry_name(c.geometry);
    if (b.nominal_finesse) {
        d["mirror_reflectivity"] = c.r1;
        d["fsr_from_linewidth_hz"] = fsr_from_linewidth(*b.nominal_finesse, *b.nominal_fwhm_hz);
    }
    return d;
}

const LoopBlock& loop_named(const RunConfig& cfg, const std::string& name) {
    const auto it = cfg.loops.find(name);
    if (it == cfg.loops.end()) throw ConfigError("loop." + name, "no [loop." + name + "] block");
    return it->second;
}

// Detected state used for the LO lock and the jitter penalty: the fit of the
// measured pair when present, otherwise the OPO at DC after detection.
std::optional<QuadraturePair> detected_state(const RunConfig& cfg) {
    if (cfg.measurement) {
        double sq = cfg.measurement->squeezed_db;
        double anti = cfg.measurement->antisqueezed_db;
        if (cfg.measurement->dark_corrected) {
            sq = variance_to_db(remove_dark_noise(db_to_variance(sq), cfg.homodyne.dark_clearance_db)).db;
            anti = variance_to_db(remove_dark_noise(db_to_variance(anti), cfg.homodyne.dark_clearance_db)).db;
        }
        return fitted_state(fit_eta_r(sq, anti));
    }
    if (cfg.opo) return apply_loss(squeezing_spectrum(cfg.opo_params(), 0.0), detection_efficiency(cfg.homodyne));
    return std::nullopt;
}

Document loops_document(const RunConfig& cfg, const std::vector<std::string>& names, Execution exec) {
    Document d = Document::object();
    const PhaseNoiseDensity noise = cfg.noise.density;
    double phase_sq = 0.0;
    bool any_phase = false;
    for (const auto& name : names) {
        const LoopBlock& b = loop_named(cfg, name);
        const auto free = integrate_residual_jitter(noise, std::nullopt, cfg.noise.f_lo_hz, cfg.noise.f_hi_hz, exec);
        const auto res = integrate_residual_jitter(noise, b.loop, cfg.noise.f_lo_hz, cfg.noise.f_hi_hz, exec);
        Document l;
        l["unity_gain_hz"] = b.loop.unity_gain_frequency;
        l["filter_slope"] = b.loop.filter_slope;
        l["suppression_at_1khz_db"] = 20.0 * std::log10(loop_suppression(b.loop, 1e3));
        l["free_running_jitter_rad"] = free.theta_rms;
        l["residual_jitter_rad"] = res.theta_rms;
        l["integration_panels"] = res.panels;
        l["phase_loop"] = b.phase_loop;
        d[name] = l;
        if (b.phase_loop) {
            phase_sq += res.theta_rms * res.theta_rms;
            any_phase = true;
        }
    }
    if (any_phase) {
        const double total = std::sqrt(phase_sq);
        Document j;
        j["total_phase_jitter_rad"] = total;
        if (const auto state = detected_state(cfg)) {
            const auto jittered = apply_phase_jitter(*state, total);
            j["squeezed_db_without_jitter"] = variance_to_db(state->squeezed()).db;
            j["squeezed_db_with_jitter"] = variance_to_db(jittered.squeezed()).db;
            j["antisqueezed_db_with_jitter"] = variance_to_db(jittered.anti_squeezed()).db;
        }
        d["jitter"] = j;
    }
    return d;
}

std::vector<std::string> all_loops(const RunConfig& cfg) {
    std::vector<std::string> names;
    for (const auto& [name, b] : cfg.loops) names.push_back(name);
    return names;
}

}  // namespace

RunConfig apply_overrides(RunConfig cfg, const CommonOptions& opts) {
    if (opts.format) cfg.format = *opts.format;
    if (opts.band) {
        cfg.spectrum.f_lo_hz = opts.band->first;
        cfg.spectrum.f_hi_hz = opts.band->second;
    }
    if (opts.points_per_decade) {
        if (*opts.points_per_decade < 1) throw ConfigError("points-per-decade", "must be at least 1");
        cfg.spectrum.points_per_decade = *opts.points_per_decade;
    }
    if (opts.mains) {
        if (*opts.mains && !cfg.spectrum.mains) cfg.spectrum.mains = MainsArtifact{};
        if (!*opts.mains) cfg.spectrum.mains.reset();
    }
    return cfg;
}

CommandResult cmd_spectrum(const RunConfig& config, const CommonOptions& opts) {
    const RunConfig cfg = apply_overrides(config, opts);
    CommandResult result;
    const SpectrumSet set = synthesize_spectrum(source_model(cfg), cfg.homodyne, cfg.spectrum, opts.exec);

    const Efficiency eta_det = detection_efficiency(cfg.homodyne);
    Params params{{"scenario", cfg.scenario}, {"config", cfg.source}};
    Document run;
    run["tool"] = kTool;
    run["command"] = "spectrum";
    run["scenario"] = cfg.scenario;
    if (cfg.opo) {
        const OpoParams p = cfg.opo_params();
        params.emplace_back("x", num(p.x));
        params.emplace_back("gamma_rad_s", num(p.gamma));
        params.emplace_back("escape_efficiency", num(p.eta_esc));
        params.emplace_back("total_efficiency", num(p.eta_esc * eta_det.value()));
        run["opo"] = {{"x", p.x}, {"decay_rate_rad_s", p.gamma}, {"escape_efficiency", p.eta_esc}};
    } else {
        params.emplace_back("source", "vacuum");
        run["opo"] = nullptr;
    }
    params.emplace_back("detection_efficiency", num(eta_det.value()));
    params.emplace_back("dark_noise", cfg.spectrum.include_dark_noise
                                          ? "on(" + num(cfg.homodyne.dark_clearance_db) + "dB)"
                                          : std::string("off"));
    params.emplace_back("band_hz", num(cfg.spectrum.f_lo_hz) + ":" + num(cfg.spectrum.f_hi_hz));
    params.emplace_back("points_per_decade", std::to_string(cfg.spectrum.points_per_decade));
    params.emplace_back("mains", on_off(cfg.spectrum.mains.has_value()));
    if (cfg.spectrum.ripple) {
        params.emplace_back("ripple_db", num(cfg.spectrum.ripple->rms_db));
        params.emplace_back("ripple_seed", std::to_string(cfg.spectrum.ripple->seed));
    }
    params.emplace_back("levels", "dB re shot noise");

    if (format_of(cfg, opts) == OutputFormat::doc) {
        result.artifacts.push_back({"spectrum.json", spectrum_doc(set, params).dump(2) + "\n"});
    } else {
        result.artifacts.push_back({"spectrum.csv", spectrum_csv(set, params)});
    }

    run["detection_efficiency"] = eta_det.value();
    run["band_hz"] = {cfg.spectrum.f_lo_hz, cfg.spectrum.f_hi_hz};
    run["points_per_decade"] = cfg.spectrum.points_per_decade;
    run["rows"] = set.shot.points.size();
    const auto mid = set.squeezed.points.size() / 2;
    run["squeezed_db_mid_band"] = set.squeezed.points[mid].level_db;
    run["antisqueezed_db_mid_band"] = set.anti_squeezed.points[mid].level_db;
    run["shot_db_mid_band"] = set.shot.points[mid].level_db;
    Document artifacts = Document::object();
    for (const auto* t : {&set.shot, &set.squeezed, &set.anti_squeezed}) artifacts[t->label] = t->artifacts;
    run["synthetic_artifacts"] = artifacts;
    run["config"] = config_echo(cfg);
    result.artifacts.push_back(report_artifact("spectrum_report", run, cfg, opts));
    return result;
}

CommandResult cmd_fit(const RunConfig& cfg, const FitOptions& fit, const CommonOptions& opts) {
    CommandResult result;
    const Efficiency bhd(fit.bhd_efficiency.value_or(detection_efficiency(cfg.homodyne).value()));
    const auto& extra = fit.extra_losses ? *fit.extra_losses : cfg.extra_losses;
    for (const double l : extra) {
        if (!(l >= 0.0 && l < 1.0)) throw ConfigError("extra-loss", "losses must lie in [0, 1)");
    }
    // Explicit extra losses replace the configured chain entirely.
    const LossBudget budget = fit.extra_losses ? LossBudget{} : cfg.budget;
    Document body;
    body["tool"] = kTool;
    body["command"] = "fit";
    body["scenario"] = cfg.scenario;
    body["config"] = cfg.source;
    const Document fitted =
        fit_document(fit.sq_db, fit.anti_db, fit.dark_clearance_db, bhd, extra, budget, result.warnings);
    for (const auto& [k, v] : fitted.items()) body[k] = v;
    if (!result.warnings.empty()) body["warnings"] = result.warnings;
    result.artifacts.push_back(report_artifact("fit_report", body, cfg, opts));
    return result;
}

ErrorSignalKind parse_error_signal_kind(const std::string& s) {
    if (s == "pdh") return ErrorSignalKind::pdh;
    if (s == "pump-phase" || s == "pump_phase") return ErrorSignalKind::pump_phase;
    if (s == "lo-phase" || s == "lo_phase") return ErrorSignalKind::lo_phase;
    throw ConfigError("errorsignal", "unknown loop selector '" + s + "' (pdh, pump-phase, lo-phase)");
}

CommandResult cmd_errorsignal(const RunConfig& cfg, const ErrorSignalOptions& es, const CommonOptions& opts) {
    CommandResult result;
    Params params{{"scenario", cfg.scenario}, {"config", cfg.source}};
    ErrorSignalTrace trace;
    std::string stem;
    if (es.harmonic && es.kind != ErrorSignalKind::pump_phase) {
        throw ConfigError("harmonic", "the demodulation harmonic override applies to pump-phase only");
    }
    if (es.harmonic && *es.harmonic != 1 && *es.harmonic != 2) throw ConfigError("harmonic", "must be 1 or 2");
    const int points = es.points > 0 ? es.points : (es.kind == ErrorSignalKind::pdh ? 2001 : 721);
    if (points < 3) throw ConfigError("points", "need at least 3 points");

    if (es.kind == ErrorSignalKind::pdh) {
        const CavityParams& c = cfg.cavity(es.cavity, "cavity").params;
        const LoopBlock* lock = nullptr;
        for (const auto& [name, b] : cfg.loops) {
            if (b.cavity == es.cavity) lock = &b;
        }
        if (!lock) throw ConfigError("cavity", "no [loop.*] block locks cavity '" + es.cavity + "'");
        const double mod = lock->loop.modulation_frequency;
        const double span = es.span_hz.value_or(std::min(fsr(c) / 2.0, 2.0 * mod));
        if (!(span > 0.0)) throw ConfigError("span", "must be positive");
        const auto grid = linear_grid(-span, span, static_cast<std::size_t>(points));
        trace = pdh_trace(c, grid, mod, lock->modulation_index, opts.exec);
        stem = "errorsignal_pdh_" + es.cavity;
        params.emplace_back("kind", "pdh");
        params.emplace_back("cavity", es.cavity);
        params.emplace_back("modulation_hz", num(mod));
        params.emplace_back("modulation_index", num(lock->modulation_index));
        params.emplace_back("fsr_hz", num(fsr(c)));
    } else if (es.kind == ErrorSignalKind::pump_phase) {
        const LoopBlock& b = loop_named(cfg, "pump_phase");
        const OpoParams p = cfg.opo_params();
        const double offset = b.loop.modulation_frequency;
        Demodulation demod;
        demod.harmonic = es.harmonic.value_or(b.loop.demod_harmonic);
        demod.phase = b.loop.demod_phase.value_or(pump_phase_default_demod(p, offset));
        const auto grid = linear_grid(-std::numbers::pi, std::numbers::pi, static_cast<std::size_t>(points));
        trace = pump_phase_trace(p, offset, grid, demod, opts.exec);
        stem = "errorsignal_pump_phase";
        params.emplace_back("kind", "pump-phase");
        params.emplace_back("x", num(p.x));
        params.emplace_back("offset_hz", num(offset));
        params.emplace_back("demod_harmonic", std::to_string(demod.harmonic));
        params.emplace_back("demod_phase_rad", num(demod.phase));
        params.emplace_back("phase_unit", "fundamental rad");
    } else {
        const LoopBlock& b = loop_named(cfg, "lo_phase");
        const auto state = detected_state(cfg);
        LoLockContext ctx;
        if (state) ctx.state = *state;
        ctx.control_amplitude = b.control_amplitude;
        const double demod_phase = b.loop.demod_phase.value_or(0.0);
        const auto grid = linear_grid(-std::numbers::pi, std::numbers::pi, static_cast<std::size_t>(points));
        trace = lo_phase_trace(ctx, b.loop.modulation_frequency, grid, demod_phase, opts.exec);
        stem = "errorsignal_lo_phase";
        params.emplace_back("kind", "lo-phase");
        params.emplace_back("offset_hz", num(b.loop.modulation_frequency));
        params.emplace_back("demod_phase_rad", num(demod_phase));
        params.emplace_back("lock_point_rad", num(lo_lock_point(ctx, demod_phase)));
        params.emplace_back("locked_variance_db", num(variance_to_db(locked_readout_variance(ctx, demod_phase)).db));
    }
    normalize_peak(trace);
    params.emplace_back("points", std::to_string(points));
    params.emplace_back("discriminating", trace.discriminating ? "true" : "false");
    params.emplace_back("normalized", trace.normalized ? "true" : "false");
    if (!trace.discriminating) {
        result.warnings.push_back("error signal is identically zero: no discrimination of the locked variable");
    }
    if (format_of(cfg, opts) == OutputFormat::doc) {
        result.artifacts.push_back({stem + ".json", trace_doc(trace, params).dump(2) + "\n"});
    } else {
        result.artifacts.push_back({stem + ".csv", trace_csv(trace, params)});
    }
    return result;
}

CommandResult cmd_loop(const RunConfig& config, const LoopOptions& lo, const CommonOptions& opts) {
    RunConfig cfg = apply_overrides(config, opts);
    if (opts.band) {
        cfg.noise.f_lo_hz = opts.band->first;
        cfg.noise.f_hi_hz = opts.band->second;
    }
    CommandResult result;
    const std::vector<std::string> names = lo.loop ? std::vector<std::string>{*lo.loop} : all_loops(cfg);
    if (names.empty()) throw ConfigError("loop", "config has no [loop.*] blocks");

    Table table;
    table.columns.push_back("frequency_hz");
    table.data.push_back(log_grid(cfg.noise.f_lo_hz, cfg.noise.f_hi_hz, cfg.spectrum.points_per_decade));
    const std::span<const double> grid = table.data.front();
    table.columns.push_back("free_running_noise_rad_rthz");
    table.data.push_back(map_grid(grid, [&](double f) { return cfg.noise.density(f); }, opts.exec));
    for (const auto& name : names) {
        const LoopBlock& b = loop_named(cfg, name);
        b.loop.validate();
        table.columns.push_back(name + "_suppression_db");
        table.data.push_back(
            map_grid(grid, [&](double f) { return 20.0 * std::log10(loop_suppression(b.loop, f)); }, opts.exec));
    }
    const Params params{{"scenario", cfg.scenario},
                        {"config", cfg.source},
                        {"noise", "synthetic white+1/f"},
                        {"white_rad_rthz", num(cfg.noise.density.white)},
                        {"corner_hz", num(cfg.noise.density.corner_hz)},
                        {"band_hz", num(cfg.noise.f_lo_hz) + ":" + num(cfg.noise.f_hi_hz)}};
    if (format_of(cfg, opts) == OutputFormat::doc) {
        result.artifacts.push_back({"loops.json", table_doc(table, "loops", params).dump(2) + "\n"});
    } else {
        result.artifacts.push_back({"loops.csv", table_csv(table, "squeezer-sim loop", params)});
    }

    Document body;
    body["tool"] = kTool;
    body["command"] = "loop";
    body["scenario"] = cfg.scenario;
    body["noise"] = {{"model", "synthetic white+1/f"},
                     {"white_rad_rthz", cfg.noise.density.white},
                     {"corner_hz", cfg.noise.density.corner_hz},
                     {"f_lo_hz", cfg.noise.f_lo_hz},
                     {"f_hi_hz", cfg.noise.f_hi_hz}};
    body["loops"] = loops_document(cfg, names, opts.exec);
    result.artifacts.push_back(report_artifact("loop_report", body, cfg, opts));
    return result;
}

Document build_report(const RunConfig& cfg, Execution exec) {
    Document d;
    d["tool"] = kTool;
    d["command"] = "report";
    d["scenario"] = cfg.scenario;
    std::vector<std::string> warnings;

    Document cavities = Document::object();
    for (const auto& [name, b] : cfg.cavities) cavities[name] = cavity_document(b);
    d["cavities"] = cavities;

    const Efficiency eta_det = detection_efficiency(cfg.homodyne);
    if (cfg.opo) {
        const OpoParams p = cfg.opo_params();
        Document o;
        o["x"] = p.x;
        o["threshold_fraction"] = p.x * p.x;
        o["decay_rate_rad_s"] = p.gamma;
        o["escape_efficiency"] = p.eta_esc;
        o["parametric_gain"] = parametric_gain(p.x);
        o["parametric_deamplification"] = parametric_gain(p.x, GainSense::deamplification);
        const auto dc = squeezing_spectrum(p, 0.0);
        o["output_squeezed_db"] = variance_to_db(dc.squeezed()).db;
        o["output_antisqueezed_db"] = variance_to_db(dc.anti_squeezed()).db;
        const auto detected = apply_loss(dc, eta_det);
        o["detected_squeezed_db"] = variance_to_db(detected.squeezed()).db;
        o["detected_antisqueezed_db"] = variance_to_db(detected.anti_squeezed()).db;
        const double f_lo = cfg.spectrum.f_lo_hz;
        const double f_hi = cfg.spectrum.f_hi_hz;
        if (f_hi <= p.gamma / (2.0 * std::numbers::pi * 10.0)) {
            o["audio_band_flatness"] = audio_band_flatness(p, f_lo, f_hi);
            o["flatness_band_hz"] = {f_lo, f_hi};
        } else {
            o["audio_band_flatness"] = nullptr;
            warnings.push_back("spectrum band reaches above a tenth of the OPO linewidth; flatness not evaluated");
        }
        d["opo"] = o;
    } else {
        d["opo"] = nullptr;
    }

    Document h;
    h["detection_efficiency"] = eta_det.value();
    h["dark_clearance_db"] = num(cfg.homodyne.dark_clearance_db);
    h["apparent_shot_db"] = variance_to_db(add_dark_noise(1.0, cfg.homodyne.dark_clearance_db)).db;
    if (cfg.measurement && std::isfinite(cfg.homodyne.dark_clearance_db)) {
        h["measured_squeezed_db_dark_corrected"] =
            variance_to_db(remove_dark_noise(db_to_variance(cfg.measurement->squeezed_db),
                                             cfg.homodyne.dark_clearance_db))
                .db;
    }
    d["homodyne"] = h;

    if (cfg.measurement) {
        std::optional<double> clearance;
        if (cfg.measurement->dark_corrected) clearance = cfg.homodyne.dark_clearance_db;
        const Document fitted = fit_document(cfg.measurement->squeezed_db, cfg.measurement->antisqueezed_db,
                                             clearance, eta_det, cfg.extra_losses, cfg.budget, warnings);
        for (const auto& [k, v] : fitted.items()) d[k] = v;
    } else {
        d["fit"] = nullptr;
        d["projection"] = nullptr;
        warnings.push_back("no [measurement] block: fit and projection skipped");
    }

    if (!cfg.loops.empty()) d["loops"] = loops_document(cfg, all_loops(cfg), exec);
    d["config"] = config_echo(cfg);
    d["warnings"] = warnings;
    return d;
}

CommandResult cmd_report(const RunConfig& cfg, const CommonOptions& opts) {
    CommandResult result;
    const RunConfig effective = apply_overrides(cfg, opts);
    const Document body = build_report(effective, opts.exec);
    for (const auto& w : body["warnings"]) result.warnings.push_back(w.get<std::string>());
    result.artifacts.push_back(report_artifact("report", body, effective, opts));
    return result;
}

}  // namespace sqz::app
