#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandgap/band_structure.hpp"
#include "bandgap/dipole.hpp"
#include "bandgap/electronic.hpp"

namespace bandgap {

inline constexpr const char* version = "0.1.0";

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Command { bands, dos, integral, energy, force, compare, electronic };
enum class SweepVariable { separation, detuning, gamma, impurity_energy };
enum class OutputFormat { csv, json };

struct SweepSpec {
    SweepVariable variable = SweepVariable::separation;
    double start = 1e-6;
    double stop = 1e-5;
    int points = 10;
    bool log_spacing = false;

    [[nodiscard]] std::vector<double> values() const;
};

/// A full batch run. Serialized as flat dotted keys ("crystal.n", "sweep.points", ...),
/// the same names as the command-line flags without the leading dashes.
struct RunConfig {
    Command command = Command::force;

    double crystal_n = 2.0;
    double crystal_a = 1e-7;
    // Optional overrides of the crystal-derived band parameters.
    std::optional<double> bands_omega_c;
    std::optional<double> bands_k0;
    std::optional<double> bands_A;

    // Defaults to omega_c (1 + 1e-4) when unset.
    std::optional<double> omega_i;
    double gamma = 1e10;
    double separation = 1e-5;
    double mu2 = 1.0;
    Vec3 dipole{0.0, 0.0, 1.0};
    Vec3 direction{1.0, 0.0, 0.0};

    WireModel wire;

    SweepSpec sweep;

    std::string out_path;  // empty: stdout
    OutputFormat format = OutputFormat::csv;
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int threads = 0;  // 0: hardware concurrency

    /// Throws ConfigError with a one-line reason.
    void validate() const;

    /// Echo of everything that determines the computed rows (not out/threads).
    [[nodiscard]] nlohmann::ordered_json to_json() const;
    /// Starts from defaults and applies every recognised key; unknown keys are errors.
    static RunConfig from_json(const nlohmann::json& flat);
};

[[nodiscard]] std::string to_string(Command command);
[[nodiscard]] std::string to_string(SweepVariable variable);
[[nodiscard]] Command parse_command(const std::string& name);
[[nodiscard]] SweepVariable parse_sweep_variable(const std::string& name);

struct Column {
    std::string name;
    std::string unit;
};

struct SweepRow {
    double sweep_value = 0.0;
    std::vector<double> values;  // one per column; NaN where a value failed
    std::string error;           // empty when every column succeeded
};

struct SweepResult {
    std::vector<std::pair<std::string, std::string>> meta;  // header echo, summaries
    Column sweep_column;
    std::vector<Column> columns;  // outputs first, then diagnostics
    std::vector<SweepRow> rows;

    [[nodiscard]] std::size_t failed_rows() const;
    /// 0 all rows fine, 2 some rows failed, 3 every row failed.
    [[nodiscard]] int exit_status() const;
    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::string to_json() const;
};

/// Band parameters used by a run: crystal-derived, with any overrides applied.
[[nodiscard]] BandStructure run_bands(const RunConfig& config);

/// Executes the command over the sweep. Points are computed in parallel and
/// assembled in sweep order, so output does not depend on the thread count.
[[nodiscard]] SweepResult run(const RunConfig& config);

/// Reads the "# config: {...}" echo back from CSV or JSON output.
[[nodiscard]] RunConfig parse_config_echo(const std::string& output);

}  // namespace bandgap
