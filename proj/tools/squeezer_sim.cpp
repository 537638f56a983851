#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sqz/app/commands.hpp"
#include "sqz/errors.hpp"

namespace fs = std::filesystem;
using namespace sqz;
using namespace sqz::app;

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const CommandResult& result, const std::optional<std::string>& out_dir) {
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    if (!out_dir) {
        std::cout << result.artifacts.front().content;
        if (result.artifacts.size() > 1) {
            std::cerr << "note: pass --out DIR to also write";
            for (std::size_t i = 1; i < result.artifacts.size(); ++i) std::cerr << " " << result.artifacts[i].filename;
            std::cerr << "\n";
        }
        return;
    }
    std::error_code ec;
    fs::create_directories(*out_dir, ec);
    if (ec) throw std::ios_base::failure("cannot create '" + *out_dir + "': " + ec.message());
    for (const auto& a : result.artifacts) {
        const fs::path path = fs::path(*out_dir) / a.filename;
        std::ofstream out(path, std::ios::binary);
        out << a.content;
        if (!out) throw std::ios_base::failure("cannot write '" + path.string() + "'");
        std::cerr << "wrote " << path.string() << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Squeezed-light source simulator: spectra, loss inference, error signals, loops, reports"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "squeezer-sim 0.1.0");

    std::string config_name = kDefaultScenario;
    std::optional<std::string> out_dir;
    std::string format_text;
    std::string band_text;
    int ppd = 0;
    std::string mains_text;
    bool serial = false;

    app.add_option("--config", config_name,
                   std::string("config file, or scenario name looked up in $") + kConfigDirEnv)
        ->capture_default_str();
    app.add_option("--out", out_dir, "directory for output files (default: primary output to stdout)");
    app.add_option("--format", format_text, "csv or doc")->check(CLI::IsMember({"csv", "doc"}));
    app.add_option("--band", band_text, "frequency band LO:HI in Hz");
    app.add_option("--points-per-decade", ppd, "grid density")->check(CLI::PositiveNumber);
    app.add_option("--mains", mains_text, "synthetic 50/100 Hz pickup lines")->check(CLI::IsMember({"on", "off"}));
    app.add_flag("--serial", serial, "run sweeps on the serial reference path");

    auto* spectrum = app.add_subcommand("spectrum", "shot / squeezed / anti-squeezed noise traces");

    auto* fit = app.add_subcommand("fit", "infer efficiency and source strength from a measured pair");
    FitOptions fit_opts;
    std::vector<double> extra_losses;
    fit->add_option("squeezed_db", fit_opts.sq_db, "squeezed level, dB re shot noise")->required();
    fit->add_option("antisqueezed_db", fit_opts.anti_db, "anti-squeezed level, dB re shot noise")->required();
    fit->add_option("--dark-clearance", fit_opts.dark_clearance_db,
                    "levels were read against a shot trace with this dark-noise clearance (dB); correct them first");
    fit->add_option("--bhd-efficiency", fit_opts.bhd_efficiency, "diagnostic detector efficiency")
        ->check(CLI::Range(0.0, 1.0));
    fit->add_option("--extra-loss", extra_losses, "projected extra loss fractions (replace the config chain)")
        ->delimiter(',');

    auto* errorsignal = app.add_subcommand("errorsignal", "swept lock error signal");
    ErrorSignalOptions es_opts;
    std::string selector;
    std::optional<int> harmonic;
    errorsignal->add_option("selector", selector, "pdh, pump-phase or lo-phase")->required();
    errorsignal->add_option("--cavity", es_opts.cavity, "cavity for the PDH trace")->capture_default_str();
    errorsignal->add_option("--harmonic", harmonic, "demodulation harmonic override (pump-phase)");
    errorsignal->add_option("--span", es_opts.span_hz, "PDH half-span in Hz");
    errorsignal->add_option("--points", es_opts.points, "sweep points");

    auto* loop = app.add_subcommand("loop", "loop suppression and residual phase jitter");
    LoopOptions loop_opts;
    loop->add_option("--loop", loop_opts.loop, "single [loop.NAME] block");

    auto* report = app.add_subcommand("report", "aggregate report of the scenario");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        CommonOptions common;
        common.generated_at = utc_now();
        common.exec = serial ? Execution::serial : Execution::parallel;
        if (!format_text.empty()) common.format = parse_format(format_text);
        if (!band_text.empty()) common.band = parse_band(band_text);
        if (ppd > 0) common.points_per_decade = ppd;
        if (!mains_text.empty()) common.mains = parse_switch(mains_text, "mains");

        const RunConfig cfg = load_config(resolve_config_path(config_name));
        if (!out_dir && cfg.output_dir) out_dir = cfg.output_dir;

        CommandResult result;
        if (*spectrum) {
            result = cmd_spectrum(cfg, common);
        } else if (*fit) {
            if (!extra_losses.empty()) fit_opts.extra_losses = extra_losses;
            result = cmd_fit(cfg, fit_opts, common);
        } else if (*errorsignal) {
            es_opts.kind = parse_error_signal_kind(selector);
            es_opts.harmonic = harmonic;
            result = cmd_errorsignal(cfg, es_opts, common);
        } else if (*loop) {
            result = cmd_loop(cfg, loop_opts, common);
        } else if (*report) {
            result = cmd_report(cfg, common);
        }
        emit(result, out_dir);
        return kExitOk;
    } catch (const PhysicsError& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return kExitPhysics;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}
