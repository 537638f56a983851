#include "sqz/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "sqz/errors.hpp"

namespace sqz::app {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double parse_number(const std::string& raw, const std::string& path) {
    const std::string s = trim(raw);
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc() || ptr != last || std::isnan(v)) {
        throw ConfigError(path, "expected a number, got '" + s + "'");
    }
    return v;
}

int parse_int(const std::string& raw, const std::string& path) {
    const double v = parse_number(raw, path);
    if (v != std::floor(v) || std::abs(v) > 1e6) throw ConfigError(path, "expected an integer");
    return static_cast<int>(v);
}

// One INI section with key bookkeeping so unknown keys are reported.
class Section {
public:
    Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

    std::string path(const std::string& key) const { return name_ + "/" + key; }

    std::optional<std::string> raw(const std::string& key) {
        used_.insert(key);
        const auto it = tree_.find(key);
        if (it == tree_.not_found()) return std::nullopt;
        return trim(it->second.data());
    }
    std::optional<double> number(const std::string& key) {
        const auto r = raw(key);
        if (!r) return std::nullopt;
        return parse_number(*r, path(key));
    }
    double number(const std::string& key, double fallback) { return number(key).value_or(fallback); }
    double required(const std::string& key) {
        const auto v = number(key);
        if (!v) throw ConfigError(path(key), "required field is missing");
        return *v;
    }
    std::optional<int> integer(const std::string& key) {
        const auto r = raw(key);
        if (!r) return std::nullopt;
        return parse_int(*r, path(key));
    }
    std::optional<bool> flag(const std::string& key) {
        const auto r = raw(key);
        if (!r) return std::nullopt;
        return parse_switch(*r, path(key));
    }

    void finish() const {
        for (const auto& [key, value] : tree_) {
            if (!used_.count(key)) throw ConfigError(path(key), "unknown field");
            if (!value.empty()) throw ConfigError(path(key), "nested values are not supported");
        }
    }

    const pt::ptree& tree() const { return tree_; }

private:
    std::string name_;
    const pt::ptree& tree_;
    std::set<std::string> used_;
};

// Wraps library invariant checks (std::invalid_argument) into field-level
// config errors. Physics errors pass through.
template <class Fn>
void check(const std::string& path, Fn&& fn) {
    try {
        fn();
    } catch (const PhysicsError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError(path, e.what());
    }
}

CavityGeometry parse_geometry(const std::string& s, const std::string& path) {
    if (s == "standing" || s == "standing_wave" || s == "linear") return CavityGeometry::standing_wave;
    if (s == "ring" || s == "traveling" || s == "traveling_wave") return CavityGeometry::traveling_wave;
    throw ConfigError(path, "geometry must be 'standing' or 'ring', got '" + s + "'");
}

std::vector<PathSegment> parse_segments(const std::string& s, const std::string& path) {
    std::vector<PathSegment> out;
    for (const auto& item : split(s, ',')) {
        const auto at = item.find('@');
        PathSegment seg;
        if (at == std::string::npos) {
            seg.length_m = parse_number(item, path);
        } else {
            seg.length_m = parse_number(item.substr(0, at), path);
            seg.index = parse_number(item.substr(at + 1), path);
        }
        out.push_back(seg);
    }
    if (out.empty()) throw ConfigError(path, "at least one segment 'length_m@index' is required");
    return out;
}

CavityBlock parse_cavity(Section& sec) {
    CavityBlock block;
    CavityParams& c = block.params;
    const auto geometry = sec.raw("geometry");
    c.geometry = geometry ? parse_geometry(*geometry, sec.path("geometry")) : CavityGeometry::standing_wave;

    const auto nominal_finesse = sec.number("finesse");
    const auto nominal_fwhm = sec.number("fwhm_hz");
    if (nominal_finesse || nominal_fwhm) {
        if (!nominal_finesse) throw ConfigError(sec.path("finesse"), "required together with fwhm_hz");
        if (!nominal_fwhm) throw ConfigError(sec.path("fwhm_hz"), "required together with finesse");
        for (const char* k : {"r1", "r2", "loss", "segments"}) {
            if (sec.raw(k)) throw ConfigError(sec.path(k), "cannot be combined with finesse/fwhm_hz");
        }
        double r = 0.0;
        double fsr_hz = 0.0;
        check(sec.path("finesse"), [&] { r = reflectivity_for_finesse(*nominal_finesse); });
        check(sec.path("fwhm_hz"), [&] { fsr_hz = fsr_from_linewidth(*nominal_finesse, *nominal_fwhm); });
        const double passes = c.geometry == CavityGeometry::standing_wave ? 2.0 : 1.0;
        c.r1 = r;
        c.r2 = r;
        c.segments = {{kSpeedOfLight / (passes * fsr_hz), 1.0}};
        block.nominal_finesse = nominal_finesse;
        block.nominal_fwhm_hz = nominal_fwhm;
    } else {
        c.r1 = sec.required("r1");
        c.r2 = sec.required("r2");
        c.round_trip_loss = sec.number("loss", 0.0);
        const auto segs = sec.raw("segments");
        if (!segs) throw ConfigError(sec.path("segments"), "required field is missing");
        c.segments = parse_segments(*segs, sec.path("segments"));
    }
    check(sec.path(""), [&] { c.validate(); });
    return block;
}

}  // namespace

bool parse_switch(const std::string& text, const std::string& path) {
    const std::string s = trim(text);
    if (s == "on" || s == "true" || s == "yes" || s == "1") return true;
    if (s == "off" || s == "false" || s == "no" || s == "0") return false;
    throw ConfigError(path, "expected on/off, got '" + s + "'");
}

OutputFormat parse_format(const std::string& text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "doc") return OutputFormat::doc;
    throw ConfigError("format", "expected 'csv' or 'doc', got '" + text + "'");
}

std::pair<double, double> parse_band(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError("band", "expected LO:HI in Hz, got '" + text + "'");
    const double lo = parse_number(text.substr(0, colon), "band");
    const double hi = parse_number(text.substr(colon + 1), "band");
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
        throw ConfigError("band", "need 0 < LO < HI, got '" + text + "'");
    }
    return {lo, hi};
}

const CavityBlock& RunConfig::cavity(const std::string& name, const std::string& referenced_from) const {
    const auto it = cavities.find(name);
    if (it == cavities.end()) throw ConfigError(referenced_from, "no [cavity." + name + "] block");
    return it->second;
}

OpoParams RunConfig::opo_params() const {
    if (!opo) throw ConfigError("opo", "no [opo] block");
    OpoParams p;
    if (opo->x) {
        p.x = *opo->x;
    } else {
        p.x = normalized_pump(*opo->pump_power_w, *opo->threshold_power_w);
    }
    p.gamma = decay_rate(cavity(opo->cavity, "opo/cavity").params);
    p.eta_esc = opo->escape_efficiency;
    p.validate();
    return p;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", source + ":" + std::to_string(e.line()) + ": " + e.message());
    }

    RunConfig cfg;
    cfg.source = source;
    for (const auto& [name, sub] : tree) {
        if (sub.empty() && !sub.data().empty()) throw ConfigError(name, "field outside of any [section]");
        Section sec(name, sub);
        if (name == "scenario") {
            if (auto n = sec.raw("name")) cfg.scenario = *n;
        } else if (name.rfind("cavity.", 0) == 0) {
            cfg.cavities.emplace(name.substr(7), parse_cavity(sec));
        } else if (name == "opo") {
            OpoBlock o;
            o.x = sec.number("x");
            o.pump_power_w = sec.number("pump_power_w");
            o.threshold_power_w = sec.number("threshold_power_w");
            o.escape_efficiency = sec.number("escape_efficiency", 1.0);
            if (auto c = sec.raw("cavity")) o.cavity = *c;
            if (o.x && (o.pump_power_w || o.threshold_power_w)) {
                throw ConfigError(sec.path("x"), "give either x or pump_power_w/threshold_power_w, not both");
            }
            if (!o.x && !(o.pump_power_w && o.threshold_power_w)) {
                throw ConfigError(sec.path("x"), "need x or both pump_power_w and threshold_power_w");
            }
            if (o.x && !(*o.x >= 0.0)) throw ConfigError(sec.path("x"), "must be non-negative");
            if (o.pump_power_w && !(*o.pump_power_w >= 0.0)) {
                throw ConfigError(sec.path("pump_power_w"), "must be non-negative");
            }
            if (o.threshold_power_w && !(*o.threshold_power_w > 0.0)) {
                throw ConfigError(sec.path("threshold_power_w"), "must be positive");
            }
            if (!(o.escape_efficiency >= 0.0 && o.escape_efficiency <= 1.0)) {
                throw ConfigError(sec.path("escape_efficiency"), "must lie in [0, 1]");
            }
            cfg.opo = o;
        } else if (name == "homodyne") {
            HomodyneParams& h = cfg.homodyne;
            h.lo_power_w = sec.number("lo_power_w", h.lo_power_w);
            h.visibility = sec.number("visibility", h.visibility);
            h.pd_quantum_efficiency = sec.number("pd_quantum_efficiency", h.pd_quantum_efficiency);
            h.dark_clearance_db = sec.number("dark_clearance_db", h.dark_clearance_db);
            check(name, [&] { h.validate(); });
        } else if (name.rfind("loop.", 0) == 0) {
            LoopBlock b;
            b.loop.unity_gain_frequency = sec.required("unity_gain_hz");
            b.loop.filter_slope = sec.integer("filter_slope").value_or(1);
            b.loop.modulation_frequency = sec.required("modulation_hz");
            b.loop.demod_harmonic = sec.integer("demod_harmonic").value_or(1);
            b.loop.demod_phase = sec.number("demod_phase_rad");
            b.modulation_index = sec.number("modulation_index", b.modulation_index);
            if (auto c = sec.raw("cavity")) b.cavity = *c;
            b.phase_loop = sec.flag("phase_loop").value_or(false);
            b.control_amplitude = sec.number("control_amplitude", b.control_amplitude);
            check(name, [&] { b.loop.validate(); });
            if (!(b.modulation_index >= 0.0 && b.modulation_index <= 1.0)) {
                throw ConfigError(sec.path("modulation_index"), "must lie in [0, 1]");
            }
            cfg.loops.emplace(name.substr(5), b);
        } else if (name == "measurement") {
            MeasurementBlock m;
            m.squeezed_db = sec.required("squeezed_db");
            m.antisqueezed_db = sec.required("antisqueezed_db");
            m.dark_corrected = sec.flag("dark_corrected").value_or(false);
            cfg.measurement = m;
        } else if (name == "budget") {
            for (const auto& [key, value] : sec.tree()) {
                const auto v = sec.number(key);
                if (!(*v >= 0.0 && *v <= 1.0)) throw ConfigError(sec.path(key), "efficiency must lie in [0, 1]");
                cfg.budget.add(key, *v);
            }
        } else if (name == "projection") {
            if (auto r = sec.raw("extra_loss")) {
                for (const auto& item : split(*r, ',')) {
                    const double l = parse_number(item, sec.path("extra_loss"));
                    if (!(l >= 0.0 && l < 1.0)) throw ConfigError(sec.path("extra_loss"), "losses must lie in [0, 1)");
                    cfg.extra_losses.push_back(l);
                }
            }
        } else if (name == "noise") {
            NoiseBlock& n = cfg.noise;
            n.density.white = sec.number("white_rad_rthz", n.density.white);
            n.density.corner_hz = sec.number("corner_hz", n.density.corner_hz);
            n.f_lo_hz = sec.number("f_lo_hz", n.f_lo_hz);
            n.f_hi_hz = sec.number("f_hi_hz", n.f_hi_hz);
            if (!(n.density.white >= 0.0)) throw ConfigError(sec.path("white_rad_rthz"), "must be non-negative");
            if (!(n.density.corner_hz >= 0.0)) throw ConfigError(sec.path("corner_hz"), "must be non-negative");
            if (!(n.f_lo_hz > 0.0 && n.f_hi_hz > n.f_lo_hz)) throw ConfigError(sec.path("f_hi_hz"), "need 0 < f_lo_hz < f_hi_hz");
        } else if (name == "spectrum") {
            SynthesisOptions& s = cfg.spectrum;
            s.f_lo_hz = sec.number("f_lo_hz", s.f_lo_hz);
            s.f_hi_hz = sec.number("f_hi_hz", s.f_hi_hz);
            s.points_per_decade = sec.integer("points_per_decade").value_or(s.points_per_decade);
            s.include_dark_noise = sec.flag("dark_noise").value_or(s.include_dark_noise);
            const bool mains = sec.flag("mains").value_or(false);
            const auto level = sec.number("mains_level_db");
            if (mains) s.mains = MainsArtifact{level.value_or(MainsArtifact{}.level_above_shot_db)};
            const auto ripple = sec.number("ripple_db");
            const auto seed = sec.integer("ripple_seed");
            if (ripple && *ripple > 0.0) {
                s.ripple = EstimationRipple{*ripple, static_cast<std::uint64_t>(seed.value_or(1))};
            }
            if (!(s.f_lo_hz > 0.0 && s.f_hi_hz > s.f_lo_hz)) throw ConfigError(sec.path("f_hi_hz"), "need 0 < f_lo_hz < f_hi_hz");
            if (s.points_per_decade < 1) throw ConfigError(sec.path("points_per_decade"), "must be at least 1");
        } else if (name == "output") {
            if (auto d = sec.raw("dir")) cfg.output_dir = *d;
            if (auto f = sec.raw("format")) {
                try {
                    cfg.format = parse_format(*f);
                } catch (const ConfigError& e) {
                    throw ConfigError(sec.path("format"), e.what());
                }
            }
        } else {
            throw ConfigError(name, "unknown section");
        }
        sec.finish();
    }

    // Cross references.
    if (cfg.opo) (void)cfg.cavity(cfg.opo->cavity, "opo/cavity");
    for (const auto& [name, b] : cfg.loops) {
        if (!b.cavity.empty()) (void)cfg.cavity(b.cavity, "loop." + name + "/cavity");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot read '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.filename().string());
}

std::filesystem::path default_config_dir() {
    if (const char* env = std::getenv(kConfigDirEnv); env && *env) return env;
    return SQZ_DEFAULT_CONFIG_DIR;
}

std::filesystem::path resolve_config_path(const std::string& name_or_path) {
    namespace fs = std::filesystem;
    const fs::path direct(name_or_path);
    if (fs::is_regular_file(direct)) return direct;
    const fs::path dir = default_config_dir();
    for (const auto& candidate : std::initializer_list<fs::path> {dir / name_or_path, dir / (name_or_path + ".cfg")}) {
        if (fs::is_regular_file(candidate)) return candidate;
    }
    throw ConfigError("config", "no config '" + name_or_path + "' (searched ., " + dir.string() + ")");
}

}  // namespace sqz::app
