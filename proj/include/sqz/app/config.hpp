#pragma once

// Run configuration: INI-style text, one section per module block.
//
//   [scenario]            name
//   [cavity.NAME]         r1, r2, loss, segments = L@n, ..., geometry
//                         or finesse, fwhm_hz, geometry (symmetric mirrors)
//   [opo]                 x | pump_power_w + threshold_power_w, escape_efficiency, cavity
//   [homodyne]            lo_power_w, visibility, pd_quantum_efficiency, dark_clearance_db
//   [loop.NAME]           unity_gain_hz, filter_slope, modulation_hz, demod_harmonic,
//                         demod_phase_rad, modulation_index, cavity, phase_loop,
//                         control_amplitude
//   [measurement]         squeezed_db, antisqueezed_db, dark_corrected
//   [budget]              NAME = efficiency, in path order
//   [projection]          extra_loss = comma-separated fractions
//   [noise]               white_rad_rthz, corner_hz, f_lo_hz, f_hi_hz
//   [spectrum]            f_lo_hz, f_hi_hz, points_per_decade, dark_noise, mains, mains_level_db,
//                         ripple_db, ripple_seed
//   [output]              dir, format
//
// Every error is a ConfigError whose path() names the field, e.g.
// "cavity.squeezer/r1".

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqz/budget.hpp"
#include "sqz/cavity.hpp"
#include "sqz/control.hpp"
#include "sqz/detection.hpp"
#include "sqz/opo.hpp"

namespace sqz::app {

enum class OutputFormat { csv, doc };

struct CavityBlock {
    CavityParams params;
    // Set when the block was given as finesse + linewidth.
    std::optional<double> nominal_finesse;
    std::optional<double> nominal_fwhm_hz;
};

struct OpoBlock {
    std::optional<double> x;
    std::optional<double> pump_power_w;
    std::optional<double> threshold_power_w;
    double escape_efficiency = 1.0;
    std::string cavity = "squeezer";
};

struct LoopBlock {
    LoopConfig loop;
    double modulation_index = 0.5;  // PDH phase-modulation depth, rad
    std::string cavity;             // PDH loops only
    bool phase_loop = false;        // residual jitter rotates the squeezing ellipse
    double control_amplitude = 1.0;  // LO-phase lock: control sideband at the detector
};

struct MeasurementBlock {
    double squeezed_db = 0.0;
    double antisqueezed_db = 0.0;
    bool dark_corrected = false;  // apply the dark-noise inverse before fitting
};

struct NoiseBlock {
    WhitePlusFlicker density;
    double f_lo_hz = 1.0;
    double f_hi_hz = 1e5;
};

struct RunConfig {
    std::string source;  // file the config was read from
    std::string scenario = "unnamed";
    std::map<std::string, CavityBlock> cavities;
    std::optional<OpoBlock> opo;
    HomodyneParams homodyne;
    std::map<std::string, LoopBlock> loops;
    std::optional<MeasurementBlock> measurement;
    LossBudget budget;
    std::vector<double> extra_losses;
    NoiseBlock noise;
    SynthesisOptions spectrum;
    std::optional<std::string> output_dir;
    OutputFormat format = OutputFormat::csv;

    const CavityBlock& cavity(const std::string& name, const std::string& referenced_from) const;
    // OPO parameters with gamma taken from the referenced cavity. Physics
    // errors (above threshold) propagate unchanged.
    OpoParams opo_params() const;
};

RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::filesystem::path& path);

// Directory searched for bare config names: $SQUEEZER_SIM_CONFIG_DIR, else
// the shipped config directory.
std::filesystem::path default_config_dir();
inline constexpr const char* kConfigDirEnv = "SQUEEZER_SIM_CONFIG_DIR";
inline constexpr const char* kDefaultScenario = "geo600";

// An existing path is used as is; otherwise NAME and NAME.cfg are looked up
// in the config directory.
std::filesystem::path resolve_config_path(const std::string& name_or_path);

// "LO:HI" in Hz, 0 < LO < HI.
std::pair<double, double> parse_band(const std::string& text);
OutputFormat parse_format(const std::string& text);
bool parse_switch(const std::string& text, const std::string& path);

}  // namespace sqz::app
