#include "bandgap/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "bandgap/constants.hpp"
#include "bandgap/errors.hpp"
#include "bandgap/forces.hpp"
#include "bandgap/resolvent.hpp"

namespace bandgap {
namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string number(double v) { return fmt::format("{:.17g}", v); }

Vec3 parse_vec3(const json& value, const std::string& key) {
    Vec3 out{};
    if (value.is_array()) {
        if (value.size() != 3) throw ConfigError(key + ": expected three components");
        for (std::size_t i = 0; i < 3; ++i) out[i] = value[i].get<double>();
        return out;
    }
    if (value.is_string()) {
        std::stringstream ss(value.get<std::string>());
        std::string item;
        std::size_t i = 0;
        while (std::getline(ss, item, ',')) {
            if (i >= 3) throw ConfigError(key + ": expected X,Y,Z");
            try {
                out[i++] = std::stod(item);
            } catch (const std::exception&) {
                throw ConfigError(key + ": '" + item + "' is not a number");
            }
        }
        if (i != 3) throw ConfigError(key + ": expected X,Y,Z");
        return out;
    }
    throw ConfigError(key + ": expected an array or \"X,Y,Z\"");
}

double as_double(const json& value, const std::string& key) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        try {
            std::size_t used = 0;
            const std::string text = value.get<std::string>();
            const double v = std::stod(text, &used);
            if (used == text.size()) return v;
        } catch (const std::exception&) {
        }
    }
    throw ConfigError(key + ": expected a number");
}

int as_int(const json& value, const std::string& key) {
    const double v = as_double(value, key);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key + ": expected an integer");
    return static_cast<int>(v);
}

bool as_bool(const json& value, const std::string& key) {
    if (value.is_boolean()) return value.get<bool>();
    if (value.is_string()) {
        const auto text = value.get<std::string>();
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
    }
    throw ConfigError(key + ": expected true or false");
}

std::string as_string(const json& value, const std::string& key) {
    if (!value.is_string()) throw ConfigError(key + ": expected a string");
    return value.get<std::string>();
}

AtomPairConfig atoms(const RunConfig& config, const BandStructure& bands, Dimensionality dim) {
    AtomPairConfig cfg;
    cfg.omega_i = config.omega_i.value_or(bands.omega_c * (1.0 + 1e-4));
    cfg.gamma = config.gamma;
    cfg.separation = config.separation;
    cfg.dipole_magnitude_sq = config.mu2;
    cfg.dipole_unit_vector = config.dipole;
    cfg.separation_direction = config.direction;
    cfg.dimensionality = dim;
    return cfg;
}

// Copy of the config with the sweep variable set to value.
RunConfig at_point(const RunConfig& config, const BandStructure& bands, double value) {
    RunConfig point = config;
    switch (config.sweep.variable) {
        case SweepVariable::separation:
            point.separation = value;
            point.wire.separation = value;
            break;
        case SweepVariable::detuning:
            point.omega_i = bands.omega_c + value;
            break;
        case SweepVariable::gamma:
            point.gamma = value;
            break;
        case SweepVariable::impurity_energy:
            point.wire.impurity_energy = value;
            break;
    }
    return point;
}

class RowBuilder {
public:
    explicit RowBuilder(double sweep_value) { row_.sweep_value = sweep_value; }

    void add(const char* column, const std::function<double()>& compute) {
        try {
            row_.values.push_back(compute());
        } catch (const std::exception& e) {
            row_.values.push_back(nan);
            if (!row_.error.empty()) row_.error += "; ";
            row_.error += std::string(column) + ": " + e.what();
        }
    }

    SweepRow take() { return std::move(row_); }

private:
    SweepRow row_;
};

double relative_difference(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Plan {
    std::vector<Column> columns;
    std::vector<double> sweep_values;
    Column sweep_column;
    std::function<SweepRow(double)> compute;
};

Column sweep_column_for(SweepVariable variable) {
    switch (variable) {
        case SweepVariable::separation: return {"separation", "m"};
        case SweepVariable::detuning: return {"detuning", "rad/s"};
        case SweepVariable::gamma: return {"gamma", "rad/s"};
        case SweepVariable::impurity_energy: return {"impurity_energy", "reduced"};
    }
    return {"sweep_value", ""};
}

Plan plan_for(const RunConfig& config, const BandStructure& bands,
              std::vector<std::pair<std::string, std::string>>& meta) {
    Plan plan;
    plan.sweep_values = config.sweep.values();
    plan.sweep_column = sweep_column_for(config.sweep.variable);
    const double tol = config.rel_tol;

    switch (config.command) {
        case Command::bands: {
            const CrystalSpec spec(config.crystal_n, config.crystal_a);
            const double edge = spec.zone_edge();
            plan.sweep_column = {"k", "rad/m"};
            plan.sweep_values.clear();
            const int n = config.sweep.points;
            for (int i = 0; i < n; ++i) {
                plan.sweep_values.push_back(i == n - 1 ? edge : edge * i / (n - 1));
            }
            meta.emplace_back("A_lower[m^2/s]", number(effective_mass(spec, Edge::lower)));
            meta.emplace_back("gap_width[rad/s]", number(bands.omega_c - bands.omega_v));
            meta.emplace_back("period[m]", number(spec.period()));
            plan.columns = {{"omega_lower", "rad/s"},
                            {"omega_upper", "rad/s"},
                            {"omega_lower_em", "rad/s"},
                            {"omega_upper_em", "rad/s"}};
            plan.compute = [spec, bands](double k) {
                RowBuilder row(k);
                row.add("omega_lower", [&] { return dispersion(k, spec, Branch::lower); });
                row.add("omega_upper", [&] { return dispersion(k, spec, Branch::upper); });
                row.add("omega_lower_em", [&] { return dispersion_em(k, bands, Side::below); });
                row.add("omega_upper_em", [&] { return dispersion_em(k, bands, Side::above); });
                return row.take();
            };
            break;
        }
        case Command::dos: {
            const double gap = bands.omega_c - bands.omega_v;
            const double lo = bands.omega_v - 0.5 * gap;
            const double hi = bands.omega_c + 0.5 * gap;
            plan.sweep_column = {"omega", "rad/s"};
            plan.sweep_values.clear();
            const int n = config.sweep.points;
            for (int i = 0; i < n; ++i) {
                plan.sweep_values.push_back(i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1));
            }
            plan.columns = {{"dos", "s/m^3"}, {"in_gap", "flag"}};
            plan.compute = [bands](double w) {
                RowBuilder row(w);
                row.add("dos", [&] { return dos(w, bands); });
                row.add("in_gap", [&] { return (w > bands.omega_v && w < bands.omega_c) ? 1.0 : 0.0; });
                return row.take();
            };
            break;
        }
        case Command::integral: {
            plan.columns = {{"I3_closed", "1/m"},     {"I3_quadrature", "1/m"}, {"I3_near_edge", "1/m"},
                            {"I3_rel_diff", "1"},     {"I1_closed", "1/m"},     {"I1_quadrature", "1/m"},
                            {"I1_near_edge", "1/m"},  {"I1_rel_diff", "1"},     {"I3_quad_error", "1/m"},
                            {"I1_quad_error", "1/m"}, {"far_zone_ok", "flag"}};
            plan.compute = [config, bands, tol](double value) {
                const RunConfig point = at_point(config, bands, value);
                const AtomPairConfig cfg = atoms(point, bands, Dimensionality::three_d);
                const double zeta = cfg.omega_i;
                const double r = cfg.separation;
                RowBuilder row(value);
                IntegralResult i3q{nan, nan, false};
                IntegralResult i1q{nan, nan, false};
                double i3c = nan;
                double i1c = nan;
                row.add("I3_closed", [&] { return i3c = integral_I3(zeta, r, bands, IntegralMethod::closed).value; });
                row.add("I3_quadrature", [&] {
                    i3q = integral_I3(zeta, r, bands, IntegralMethod::quadrature, tol);
                    return i3q.value;
                });
                row.add("I3_near_edge", [&] { return integral_I3(zeta, r, bands, IntegralMethod::near_edge).value; });
                row.add("I3_rel_diff", [&] { return relative_difference(i3c, i3q.value); });
                row.add("I1_closed", [&] { return i1c = integral_I1(zeta, r, bands, IntegralMethod::closed).value; });
                row.add("I1_quadrature", [&] {
                    i1q = integral_I1(zeta, r, bands, IntegralMethod::quadrature, tol);
                    return i1q.value;
                });
                row.add("I1_near_edge", [&] { return integral_I1(zeta, r, bands, IntegralMethod::near_edge).value; });
                row.add("I1_rel_diff", [&] { return relative_difference(i1c, i1q.value); });
                row.add("I3_quad_error", [&] { return i3q.error; });
                row.add("I1_quad_error", [&] { return i1q.error; });
                row.add("far_zone_ok", [&] { return bands.k0 * r >= 10.0 ? 1.0 : 0.0; });
                return row.take();
            };
            break;
        }
        case Command::energy:
        case Command::force: {
            const bool energy = config.command == Command::energy;
            if (energy) {
                plan.columns = {{"energy_3d", "reduced"},       {"energy_3d_reg", "reduced"},
                                {"vacuum_energy_3d", "reduced"}, {"energy_1d", "reduced"},
                                {"energy_1d_reg", "reduced"},    {"vacuum_energy_1d", "reduced"},
                                {"far_zone_ok", "flag"},         {"edge_proximity", "1"}};
            } else {
                plan.columns = {{"force_3d", "reduced"},       {"force_3d_reg", "reduced"},
                                {"vacuum_force_3d", "reduced"}, {"force_1d", "reduced"},
                                {"force_1d_reg", "reduced"},    {"vacuum_force_1d", "reduced"},
                                {"far_zone_ok", "flag"},        {"edge_proximity", "1"}};
            }
            plan.compute = [config, bands, energy](double value) {
                const RunConfig point = at_point(config, bands, value);
                const AtomPairConfig c3 = atoms(point, bands, Dimensionality::three_d);
                const AtomPairConfig c1 = atoms(point, bands, Dimensionality::one_d);
                RowBuilder row(value);
                if (energy) {
                    row.add("energy_3d", [&] { return energy_shift_3d(c3, bands, false); });
                    row.add("energy_3d_reg", [&] { return energy_shift_3d(c3, bands, true); });
                    row.add("vacuum_energy_3d", [&] { return vacuum_energy_shift(c3); });
                    row.add("energy_1d", [&] { return energy_shift_1d(c1, bands, false); });
                    row.add("energy_1d_reg", [&] { return energy_shift_1d(c1, bands, true); });
                    row.add("vacuum_energy_1d", [&] { return vacuum_energy_shift(c1); });
                } else {
                    row.add("force_3d", [&] { return force_3d(c3, bands, false); });
                    row.add("force_3d_reg", [&] { return force_3d(c3, bands, true); });
                    row.add("vacuum_force_3d", [&] { return vacuum_force(c3); });
                    row.add("force_1d", [&] { return force_1d(c1, bands, false); });
                    row.add("force_1d_reg", [&] { return force_1d(c1, bands, true); });
                    row.add("vacuum_force_1d", [&] { return vacuum_force(c1); });
                }
                row.add("far_zone_ok", [&] { return bands.k0 * c3.separation >= 10.0 ? 1.0 : 0.0; });
                row.add("edge_proximity", [&] {
                    return c3.gamma > 0.0 ? (c3.omega_i - bands.omega_c) / c3.gamma
                                          : std::numeric_limits<double>::infinity();
                });
                return row.take();
            };
            break;
        }
        case Command::compare: {
            {
                const AtomPairConfig c1 = atoms(config, bands, Dimensionality::one_d);
                meta.emplace_back("gamma_1d_for_ratio_10[rad/s]",
                                  number(back_solved_gamma_1d(bands, c1.omega_i)) + " (inferred)");
            }
            plan.columns = {{"ratio_3d", "1"}, {"ratio_1d", "1"}, {"gamma_effective", "rad/s"}};
            plan.compute = [config, bands](double value) {
                const RunConfig point = at_point(config, bands, value);
                AtomPairConfig c3 = atoms(point, bands, Dimensionality::three_d);
                // Envelope ratio of the regularized force: the linewidth enters as |detuning| + gamma.
                c3.gamma = std::abs(c3.omega_i - bands.omega_c) + c3.gamma;
                AtomPairConfig c1 = c3;
                c1.dimensionality = Dimensionality::one_d;
                RowBuilder row(value);
                row.add("ratio_3d", [&] { return enhancement_ratio(c3, bands, Dimensionality::three_d); });
                row.add("ratio_1d", [&] { return enhancement_ratio(c1, bands, Dimensionality::one_d); });
                row.add("gamma_effective", [&] { return c3.gamma; });
                return row.take();
            };
            break;
        }
        case Command::electronic: {
            plan.sweep_column = config.sweep.variable == SweepVariable::separation
                                    ? Column{"separation", "lattice"}
                                    : Column{"impurity_energy", "reduced"};
            plan.columns = {{"kappa0", "rad/lattice"},         {"shift_symmetric", "reduced"},
                            {"shift_antisymmetric", "reduced"}, {"force_symmetric", "reduced/lattice"},
                            {"force_antisymmetric", "reduced/lattice"}};
            plan.compute = [config, bands](double value) {
                const RunConfig point = at_point(config, bands, value);
                WireModel sym = point.wire;
                sym.parity = Parity::symmetric;
                WireModel anti = point.wire;
                anti.parity = Parity::antisymmetric;
                RowBuilder row(value);
                row.add("kappa0", [&] { return kappa0(sym.impurity_energy, sym.half_bandwidth); });
                row.add("shift_symmetric", [&] {
                    return solve_electronic_pole(sym, PoleMode::first_iteration).z_over_hbar - sym.impurity_energy;
                });
                row.add("shift_antisymmetric", [&] {
                    return solve_electronic_pole(anti, PoleMode::first_iteration).z_over_hbar - anti.impurity_energy;
                });
                row.add("force_symmetric", [&] { return electronic_force(sym); });
                row.add("force_antisymmetric", [&] { return electronic_force(anti); });
                return row.take();
            };
            break;
        }
    }
    return plan;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string tagged(const Column& c) { return c.name + "[" + c.unit + "]"; }

}  // namespace

std::vector<double> SweepSpec::values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(points, 0)));
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        if (i == 0) {
            out.push_back(start);
        } else if (i == points - 1) {
            out.push_back(stop);
        } else if (log_spacing) {
            out.push_back(std::exp(std::log(start) + t * (std::log(stop) - std::log(start))));
        } else {
            out.push_back(start + t * (stop - start));
        }
    }
    return out;
}

std::string to_string(Command command) {
    switch (command) {
        case Command::bands: return "bands";
        case Command::dos: return "dos";
        case Command::integral: return "integral";
        case Command::energy: return "energy";
        case Command::force: return "force";
        case Command::compare: return "compare";
        case Command::electronic: return "electronic";
    }
    return "unknown";
}

std::string to_string(SweepVariable variable) {
    switch (variable) {
        case SweepVariable::separation: return "separation";
        case SweepVariable::detuning: return "detuning";
        case SweepVariable::gamma: return "gamma";
        case SweepVariable::impurity_energy: return "impurity_energy";
    }
    return "unknown";
}

Command parse_command(const std::string& name) {
    for (Command c : {Command::bands, Command::dos, Command::integral, Command::energy,
                      Command::force, Command::compare, Command::electronic}) {
        if (to_string(c) == name) return c;
    }
    throw ConfigError("unknown command '" + name + "'");
}

SweepVariable parse_sweep_variable(const std::string& name) {
    for (SweepVariable v : {SweepVariable::separation, SweepVariable::detuning,
                            SweepVariable::gamma, SweepVariable::impurity_energy}) {
        if (to_string(v) == name) return v;
    }
    throw ConfigError("unknown sweep variable '" + name + "'");
}

void RunConfig::validate() const {
    if (sweep.points < 2) throw ConfigError("sweep.points must be >= 2");
    if (!(sweep.start < sweep.stop)) throw ConfigError("sweep.start must be < sweep.stop");
    if (sweep.log_spacing && !(sweep.start > 0.0)) {
        throw ConfigError("sweep.log requires sweep.start > 0");
    }
    const auto var = sweep.variable;
    auto allow = [&](std::initializer_list<SweepVariable> ok) {
        if (std::find(ok.begin(), ok.end(), var) == ok.end()) {
            throw ConfigError("sweep.var '" + to_string(var) + "' is not valid for command '" +
                              to_string(command) + "'");
        }
    };
    switch (command) {
        case Command::bands:
        case Command::dos: break;
        case Command::integral: allow({SweepVariable::separation, SweepVariable::detuning}); break;
        case Command::energy:
        case Command::force:
            allow({SweepVariable::separation, SweepVariable::detuning, SweepVariable::gamma});
            break;
        case Command::compare: allow({SweepVariable::gamma, SweepVariable::detuning}); break;
        case Command::electronic:
            allow({SweepVariable::separation, SweepVariable::impurity_energy});
            break;
    }
    try {
        (void)CrystalSpec(crystal_n, crystal_a);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    for (const auto& [name, v] : {std::pair{"bands.omega-c", bands_omega_c},
                                  std::pair{"bands.k0", bands_k0}, std::pair{"bands.A", bands_A},
                                  std::pair{"atoms.omega-i", omega_i}}) {
        if (v && !(*v > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
    }
    if (!(gamma >= 0.0)) throw ConfigError("atoms.gamma must be >= 0");
    if (!(separation > 0.0)) throw ConfigError("atoms.separation must be > 0");
    if (!(mu2 >= 0.0)) throw ConfigError("atoms.mu2 must be >= 0");
    if (std::abs(norm(dipole) - 1.0) > 1e-12) throw ConfigError("atoms.dipole must be a unit vector");
    if (std::abs(norm(direction) - 1.0) > 1e-12) {
        throw ConfigError("atoms.direction must be a unit vector");
    }
    if (!(wire.half_bandwidth > 0.0)) throw ConfigError("wire.b must be > 0");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("rel-tol and abs-tol must be > 0");
    if (threads < 0) throw ConfigError("threads must be >= 0");
}

ordered_json RunConfig::to_json() const {
    ordered_json j;
    j["command"] = to_string(command);
    j["crystal.n"] = crystal_n;
    j["crystal.a"] = crystal_a;
    if (bands_omega_c) j["bands.omega-c"] = *bands_omega_c;
    if (bands_k0) j["bands.k0"] = *bands_k0;
    if (bands_A) j["bands.A"] = *bands_A;
    if (omega_i) j["atoms.omega-i"] = *omega_i;
    j["atoms.gamma"] = gamma;
    j["atoms.separation"] = separation;
    j["atoms.mu2"] = mu2;
    j["atoms.dipole"] = dipole;
    j["atoms.direction"] = direction;
    j["wire.e0"] = wire.impurity_energy;
    j["wire.b"] = wire.half_bandwidth;
    j["wire.g"] = wire.coupling;
    j["wire.parity"] = wire.parity == Parity::symmetric ? "symmetric" : "antisymmetric";
    j["wire.x"] = wire.separation;
    j["sweep.var"] = to_string(sweep.variable);
    j["sweep.start"] = sweep.start;
    j["sweep.stop"] = sweep.stop;
    j["sweep.points"] = sweep.points;
    j["sweep.log"] = sweep.log_spacing;
    j["format"] = format == OutputFormat::csv ? "csv" : "json";
    j["rel-tol"] = rel_tol;
    j["abs-tol"] = abs_tol;
    return j;
}

RunConfig RunConfig::from_json(const json& flat) {
    if (!flat.is_object()) throw ConfigError("config must be a JSON object of dotted keys");
    RunConfig c;
    for (const auto& [key, value] : flat.items()) {
        if (key == "command") c.command = parse_command(as_string(value, key));
        else if (key == "crystal.n") c.crystal_n = as_double(value, key);
        else if (key == "crystal.a") c.crystal_a = as_double(value, key);
        else if (key == "bands.omega-c") c.bands_omega_c = as_double(value, key);
        else if (key == "bands.k0") c.bands_k0 = as_double(value, key);
        else if (key == "bands.A") c.bands_A = as_double(value, key);
        else if (key == "atoms.omega-i") c.omega_i = as_double(value, key);
        else if (key == "atoms.gamma") c.gamma = as_double(value, key);
        else if (key == "atoms.separation") c.separation = as_double(value, key);
        else if (key == "atoms.mu2") c.mu2 = as_double(value, key);
        else if (key == "atoms.dipole") c.dipole = parse_vec3(value, key);
        else if (key == "atoms.direction") c.direction = parse_vec3(value, key);
        else if (key == "wire.e0") c.wire.impurity_energy = as_double(value, key);
        else if (key == "wire.b") c.wire.half_bandwidth = as_double(value, key);
        else if (key == "wire.g") c.wire.coupling = as_double(value, key);
        else if (key == "wire.x") c.wire.separation = as_double(value, key);
        else if (key == "wire.parity") {
            const auto p = as_string(value, key);
            if (p == "symmetric") c.wire.parity = Parity::symmetric;
            else if (p == "antisymmetric") c.wire.parity = Parity::antisymmetric;
            else throw ConfigError("wire.parity must be symmetric or antisymmetric");
        }
        else if (key == "sweep.var") c.sweep.variable = parse_sweep_variable(as_string(value, key));
        else if (key == "sweep.start") c.sweep.start = as_double(value, key);
        else if (key == "sweep.stop") c.sweep.stop = as_double(value, key);
        else if (key == "sweep.points") c.sweep.points = as_int(value, key);
        else if (key == "sweep.log") c.sweep.log_spacing = as_bool(value, key);
        else if (key == "format") {
            const auto f = as_string(value, key);
            if (f == "csv") c.format = OutputFormat::csv;
            else if (f == "json") c.format = OutputFormat::json;
            else throw ConfigError("format must be csv or json");
        }
        else if (key == "out") c.out_path = as_string(value, key);
        else if (key == "rel-tol") c.rel_tol = as_double(value, key);
        else if (key == "abs-tol") c.abs_tol = as_double(value, key);
        else if (key == "threads") c.threads = as_int(value, key);
        else throw ConfigError("unknown config key '" + key + "'");
    }
    return c;
}

BandStructure run_bands(const RunConfig& config) {
    BandStructure bands = make_band_structure(CrystalSpec(config.crystal_n, config.crystal_a));
    if (config.bands_omega_c) {
        // Keep the crystal's gap ratio so omega_v stays below the new edge.
        bands.omega_v *= *config.bands_omega_c / bands.omega_c;
        bands.omega_c = *config.bands_omega_c;
    }
    if (config.bands_k0) bands.k0 = *config.bands_k0;
    if (config.bands_A) bands.curvature_A = *config.bands_A;
    bands.validate();
    return bands;
}

std::size_t SweepResult::failed_rows() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); }));
}

int SweepResult::exit_status() const {
    const std::size_t failed = failed_rows();
    if (failed == 0) return 0;
    return failed == rows.size() ? 3 : 2;
}

std::string SweepResult::to_csv() const {
    std::string out;
    for (const auto& [key, value] : meta) {
        out += "# " + key + ": " + value + "\n";
    }
    out += csv_field(tagged(sweep_column));
    for (const auto& c : columns) out += "," + csv_field(tagged(c));
    out += ",error\n";
    for (const auto& row : rows) {
        out += number(row.sweep_value);
        for (double v : row.values) out += "," + number(v);
        out += "," + csv_field(row.error) + "\n";
    }
    return out;
}

std::string SweepResult::to_json() const {
    ordered_json doc;
    ordered_json m = ordered_json::object();
    for (const auto& [key, value] : meta) {
        if (key == "config") {
            m[key] = ordered_json::parse(value);
        } else {
            m[key] = value;
        }
    }
    doc["meta"] = m;
    ordered_json cols = ordered_json::array();
    cols.push_back({{"name", sweep_column.name}, {"unit", sweep_column.unit}});
    for (const auto& c : columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    doc["columns"] = cols;
    ordered_json rows_json = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json r;
        r[sweep_column.name] = row.sweep_value;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const double v = row.values[i];
            if (std::isfinite(v)) {
                r[columns[i].name] = v;
            } else {
                r[columns[i].name] = nullptr;
            }
        }
        r["error"] = row.error;
        rows_json.push_back(std::move(r));
    }
    doc["rows"] = rows_json;
    return doc.dump(2) + "\n";
}

SweepResult run(const RunConfig& config) {
    config.validate();
    SweepResult result;
    result.meta.emplace_back("generator", std::string("bandgap-resonance ") + version);
    result.meta.emplace_back("command", to_string(config.command));
    result.meta.emplace_back("config", config.to_json().dump());

    const BandStructure bands = run_bands(config);
    result.meta.emplace_back("omega_v[rad/s]", number(bands.omega_v));
    result.meta.emplace_back("omega_c[rad/s]", number(bands.omega_c));
    result.meta.emplace_back("k0[rad/m]", number(bands.k0));
    result.meta.emplace_back("A[m^2/s]", number(bands.curvature_A));

    Plan plan = plan_for(config, bands, result.meta);
    result.sweep_column = plan.sweep_column;
    result.columns = plan.columns;

    const std::size_t n = plan.sweep_values.size();
    result.rows.resize(n);
    unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n));
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                result.rows[i] = plan.compute(plan.sweep_values[i]);
            } catch (const std::exception& e) {
                SweepRow failed;
                failed.sweep_value = plan.sweep_values[i];
                failed.values.assign(plan.columns.size(), nan);
                failed.error = e.what();
                result.rows[i] = std::move(failed);
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    return result;
}

RunConfig parse_config_echo(const std::string& output) {
    const auto first = output.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && output[first] == '{') {
        const auto doc = json::parse(output);
        return RunConfig::from_json(doc.at("meta").at("config"));
    }
    std::istringstream in(output);
    std::string line;
    const std::string prefix = "# config: ";
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) == 0) {
            return RunConfig::from_json(json::parse(line.substr(prefix.size())));
        }
    }
    throw ConfigError("no config echo found");
}

}  // namespace bandgap
