// Command-line front end.
//   tumorfd run     --config <path> [--out <dir>]
//   tumorfd preset  --name <name> [--emit <path>]
//   tumorfd verify  --config <path> --mode <invariants|convergence|manufactured>
//   tumorfd cfl     --config <path>
// Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tumorfd/run.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw tumorfd::IoError("cannot open config file: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-difference tumor growth simulator (Brinkman flow, nutrient, drug)"};
    app.require_subcommand(1);

    std::string config_path, out_dir, preset_name, emit_path, mode;

    auto* cmd_run = app.add_subcommand("run", "run a simulation from a config file");
    cmd_run->add_option("--config", config_path, "config file path")->required();
    cmd_run->add_option("--out", out_dir, "output directory (overrides output.dir)");

    auto* cmd_preset = app.add_subcommand("preset", "emit one of the built-in experiment presets");
    cmd_preset->add_option("--name", preset_name,
                           "necrotic_core | drug | shape_irregular | inhom_boundary")
        ->required();
    cmd_preset->add_option("--emit", emit_path, "write the config here instead of stdout");

    auto* cmd_verify = app.add_subcommand("verify", "run a verification battery");
    cmd_verify->add_option("--config", config_path, "config file path")->required();
    cmd_verify->add_option("--mode", mode, "invariants | convergence | manufactured")->required();

    auto* cmd_cfl = app.add_subcommand("cfl", "print the CFL bounds without running");
    cmd_cfl->add_option("--config", config_path, "config file path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (cmd_run->parsed()) {
            tumorfd::RunConfig cfg = tumorfd::parse_config(slurp(config_path));
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            const tumorfd::RunResult res = tumorfd::run(cfg);
            std::cout << "completed " << res.steps << " steps to t = " << res.t_final << " in "
                      << res.wall_seconds << " s; manifest: " << res.manifest_path << "\n";
            return 0;
        }
        if (cmd_preset->parsed()) {
            const std::string text = tumorfd::serialize_config(tumorfd::preset(preset_name));
            if (emit_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream os(emit_path, std::ios::binary);
                if (!os) throw tumorfd::IoError("cannot open emit path: " + emit_path);
                os << text;
            }
            return 0;
        }
        if (cmd_verify->parsed()) {
            tumorfd::RunConfig cfg = tumorfd::parse_config(slurp(config_path));
            const tumorfd::VerifyReport rep = tumorfd::verify(cfg, mode);
            std::cout << rep.to_json().dump(2) << "\n";
            return rep.pass() ? 0 : 2;
        }
        if (cmd_cfl->parsed()) {
            tumorfd::RunConfig cfg = tumorfd::parse_config(slurp(config_path));
            std::cout << tumorfd::cfl_report(cfg);
            return 0;
        }
    } catch (const tumorfd::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const tumorfd::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const tumorfd::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
