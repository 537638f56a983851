#pragma once

// The five squeezer-sim commands as pure functions from a parsed config (plus
// command-line overrides) to named output artifacts. Writing files and
// choosing exit codes is left to the executable.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqz/app/config.hpp"
#include "sqz/app/report.hpp"

namespace sqz::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;   // bad config, flags or input values
inline constexpr int kExitPhysics = 3;  // PhysicsError: nonphysical pair, above threshold, ...
inline constexpr int kExitIo = 4;

struct Artifact {
    std::string filename;
    std::string content;
};

struct CommandResult {
    std::vector<Artifact> artifacts;  // first entry is the primary output
    std::vector<std::string> warnings;
};

struct CommonOptions {
    std::optional<OutputFormat> format;
    std::optional<std::pair<double, double>> band;
    std::optional<int> points_per_decade;
    std::optional<bool> mains;
    std::string generated_at = "unset";
    Execution exec = Execution::parallel;
};

// Command-line overrides folded into a copy of the config.
RunConfig apply_overrides(RunConfig cfg, const CommonOptions& opts);

CommandResult cmd_spectrum(const RunConfig& cfg, const CommonOptions& opts);

struct FitOptions {
    double sq_db = 0.0;
    double anti_db = 0.0;
    // Levels were read against a dark-noise inflated shot trace with this
    // clearance; undo it before fitting.
    std::optional<double> dark_clearance_db;
    std::optional<double> bhd_efficiency;            // default: config homodyne
    std::optional<std::vector<double>> extra_losses;  // default: config projection
};
CommandResult cmd_fit(const RunConfig& cfg, const FitOptions& fit, const CommonOptions& opts);

enum class ErrorSignalKind { pdh, pump_phase, lo_phase };
ErrorSignalKind parse_error_signal_kind(const std::string& s);

struct ErrorSignalOptions {
    ErrorSignalKind kind = ErrorSignalKind::pdh;
    std::string cavity = "mc532";  // PDH only
    std::optional<int> harmonic;   // pump-phase only
    std::optional<double> span_hz;  // PDH half-span; default min(FSR/2, 2 x modulation)
    int points = 0;                 // 0 selects 2001 (PDH) or 721 (phase sweeps)
};
CommandResult cmd_errorsignal(const RunConfig& cfg, const ErrorSignalOptions& es, const CommonOptions& opts);

struct LoopOptions {
    std::optional<std::string> loop;  // default: every [loop.*] block
};
CommandResult cmd_loop(const RunConfig& cfg, const LoopOptions& lo, const CommonOptions& opts);

CommandResult cmd_report(const RunConfig& cfg, const CommonOptions& opts);

// Report body without the timestamp.
Document build_report(const RunConfig& cfg, Execution exec = Execution::parallel);

}  // namespace sqz::app
