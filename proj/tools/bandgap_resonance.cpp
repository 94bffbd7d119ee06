#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bandgap/errors.hpp"
#include "bandgap/sweep.hpp"

namespace {

void config_error(const std::string& reason) {
    std::cerr << "config-error: " << reason << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonant interaction of two atoms near a photonic band edge"};
    app.set_version_flag("--version", std::string(bandgap::version));

    std::string command;
    std::string config_path;
    app.add_option("command", command, "bands | dos | integral | energy | force | compare | electronic")
        ->required();
    app.add_option("--config", config_path, "JSON file of dotted keys; flags override it");

    // Every dotted key can also be given as a flag. Values are kept as text and
    // merged over the config file, then parsed once by RunConfig::from_json.
    const std::vector<std::pair<std::string, std::string>> keys = {
        {"crystal.n", "slab refractive index"},
        {"crystal.a", "slab half-width a (m)"},
        {"bands.omega-c", "override upper gap edge (rad/s)"},
        {"bands.k0", "override gap wavenumber (rad/m)"},
        {"bands.A", "override curvature (m^2/s)"},
        {"atoms.omega-i", "atomic transition (rad/s)"},
        {"atoms.gamma", "linewidth (rad/s)"},
        {"atoms.separation", "separation (m)"},
        {"atoms.mu2", "reduced dipole strength"},
        {"atoms.dipole", "dipole unit vector X,Y,Z"},
        {"atoms.direction", "separation unit vector X,Y,Z"},
        {"wire.e0", "impurity energy"},
        {"wire.b", "half bandwidth"},
        {"wire.g", "coupling"},
        {"wire.parity", "symmetric | antisymmetric"},
        {"wire.x", "impurity separation (lattice units)"},
        {"sweep.var", "separation | detuning | gamma | impurity_energy"},
        {"sweep.start", "first sweep value"},
        {"sweep.stop", "last sweep value"},
        {"sweep.points", "number of sweep points"},
        {"format", "csv | json"},
        {"out", "output file (default stdout)"},
        {"rel-tol", "relative quadrature tolerance"},
        {"abs-tol", "absolute quadrature tolerance"},
        {"threads", "worker threads (0: all cores)"},
    };
    std::map<std::string, std::string> given;
    for (const auto& [key, help] : keys) {
        app.add_option("--" + key, given[key], help);
    }
    bool log_spacing = false;
    app.add_flag("--sweep.log", log_spacing, "logarithmic sweep spacing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        config_error(e.what());
        return 1;
    }

    bandgap::RunConfig config;
    try {
        nlohmann::json flat = nlohmann::json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw bandgap::ConfigError("cannot read " + config_path);
            try {
                flat = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw bandgap::ConfigError(config_path + ": " + e.what());
            }
            if (!flat.is_object()) throw bandgap::ConfigError(config_path + ": expected an object");
        }
        flat["command"] = command;
        for (const auto& [key, help] : keys) {
            if (app.count("--" + key) > 0) flat[key] = given[key];
        }
        if (log_spacing) flat["sweep.log"] = true;
        config = bandgap::RunConfig::from_json(flat);
        config.validate();
    } catch (const std::exception& e) {
        config_error(e.what());
        return 1;
    }

    bandgap::SweepResult result;
    try {
        result = bandgap::run(config);
    } catch (const bandgap::ConfigError& e) {
        config_error(e.what());
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }

    const std::string text =
        config.format == bandgap::OutputFormat::json ? result.to_json() : result.to_csv();
    if (config.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(config.out_path);
        if (!out) {
            config_error("cannot write " + config.out_path);
            return 1;
        }
        out << text;
    }
    if (result.failed_rows() > 0) {
        std::cerr << result.failed_rows() << " of " << result.rows.size() << " rows failed\n";
    }
    return result.exit_status();
}
