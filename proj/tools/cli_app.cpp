#include "cli_app.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "wvsim/hom.hpp"
#include "wvsim/prepost.hpp"
#include "wvsim/weakmeas.hpp"

namespace wvsim::cli {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

constexpr const char* kReadoutHeader = "G,P_V,R,p_A_nominal";
constexpr const char* kCountsHeader = "G,counts_H,counts_V,trials,seed";

struct ParamSpec {
    const char* key;
    const char* help;
    bool required = false;
    const char* fallback = "";  // default when optional
};

struct CommandSpec {
    const char* name;
    const char* help;
    std::vector<ParamSpec> params;
};

const std::vector<CommandSpec>& command_table() {
    static const std::vector<CommandSpec> table{
        {"threebox",
         "Weak values and intermediate-measurement probabilities of the three-box arrangement",
         {}},
        {"weakvalue",
         "Path-projector weak values of the two-path preparation pinned to p_A",
         {{"p_A", "weak value of the path-A projector", true}}},
        {"interferometer",
         "Single run of the two-path polarization interferometer",
         {{"p_A", "weak value of the path-A projector", true},
          {"G", "measurement strength in [0,1]", true}}},
        {"readout-sweep",
         "Normalized readout versus strength; exact curve or seeded photon counts",
         {{"p_A", "weak value of the path-A projector", true},
          {"G", "strength grid start:stop:step, each value in (0,1]", true},
          {"trials", "trials per grid point; 0 emits the exact curve", false, "0"},
          {"seed", "base RNG seed; point k uses seed+k", false, "1"},
          {"background_rate", "background event probability per trial", false, "0"}}},
        {"fit",
         "Least-squares weak-value extraction from a readout or counts CSV",
         {{"input", "CSV produced by readout-sweep (either format)", true}}},
        {"hom-sweep",
         "Two-photon visibility versus the photon-2 correction plate angle",
         {{"p_A2", "weak value pinned for photon 2", true},
          {"G", "measurement strength in [0,1]", true},
          {"grid", "plate angle grid in degrees relative to theta", false, "-20:20:0.05"},
          {"p_A1", "weak value pinned for photon 1", false, "1"},
          {"hwp4_deg", "photon-1 correction plate angle, degrees", false, "45"},
          {"background_ratio", "accidental/signal coincidence ratio", false, "0"},
          {"kappa", "if set, ties background_ratio to kappa/postselect_prob", false, ""}}},
    };
    return table;
}

const CommandSpec* find_command(const std::string& name) {
    for (const auto& spec : command_table()) {
        if (name == spec.name) return &spec;
    }
    return nullptr;
}

std::string usage_text() {
    std::string text = "usage: wvsim <command> [options]\n\ncommands:\n";
    for (const auto& spec : command_table()) {
        const std::string name = spec.name;
        text += "  " + name;
        text.append(name.size() < 16 ? 16 - name.size() : 1, ' ');
        text += spec.help;
        text += '\n';
    }
    text += "\nRun 'wvsim <command> --help' for the command's options. Every command\n"
            "also accepts --config <file> (key = value lines) and --output <path>.\n";
    return text;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto* begin = t.data();
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || t.empty()) {
        throw std::invalid_argument(key + ": expected a real number, got '" + text + "'");
    }
    return value;
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    std::uint64_t value = 0;
    const auto* begin = t.data();
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || t.empty()) {
        throw std::invalid_argument(key + ": expected a nonnegative integer, got '" + text + "'");
    }
    return value;
}

// -------------------------------------------------------------------------
// CSV assembly

class CsvBuilder {
public:
    explicit CsvBuilder(std::string header) { (text_ += header) += '\n'; }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t k = 0; k < fields.size(); ++k) {
            if (k) text_ += ',';
            text_ += fields[k];
        }
        text_ += '\n';
    }

    void comment_row(const std::string& key, const std::string& value) {
        ((((text_ += "# ") += key) += ',') += value) += '\n';
    }

    const std::string& str() const { return text_; }

private:
    std::string text_;
};

// -------------------------------------------------------------------------
// Command handlers: resolved parameters in, CSV text out.

using Resolved = std::map<std::string, std::string>;

std::string run_threebox(const Resolved&) {
    const ThreeBoxScenario scenario = three_box_scenario();
    CsvBuilder csv("observable,weak_value_re,weak_value_im,abl_probability");
    const std::array<std::pair<const char*, const Operator*>, 3> boxes{{
        {"A", &scenario.box_a}, {"B", &scenario.box_b}, {"C", &scenario.box_c}}};
    for (const auto& [tag, proj] : boxes) {
        const WeakValueResult wv = weak_value(scenario.selection, *proj, tag);
        const double abl = abl_probability(scenario.selection, *proj);
        csv.row({tag, format_number(wv.value.real()), format_number(wv.value.imag()),
                 format_number(abl)});
    }
    return csv.str();
}

std::string run_weakvalue(const Resolved& params) {
    const double p_a = parse_double(params.at("p_A"), "p_A");
    const StateVector pre = preselection_from_weak_value(p_a);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const StateVector post(pre.labels(), {Complex{inv_sqrt2, 0.0}, Complex{-inv_sqrt2, 0.0}});
    const PrePostSelection pp(pre, post);

    CsvBuilder csv("observable,weak_value_re,weak_value_im,abl_probability");
    for (std::size_t k = 0; k < 2; ++k) {
        const std::string tag = pre.labels()[k];
        const Operator proj = Operator::projector(StateVector::basis_state(pre.labels(), k));
        const WeakValueResult wv = weak_value(pp, proj, tag);
        csv.row({tag, format_number(wv.value.real()), format_number(wv.value.imag()),
                 format_number(abl_probability(pp, proj))});
    }
    return csv.str();
}

std::string run_interferometer_cmd(const Resolved& params) {
    const double p_a = parse_double(params.at("p_A"), "p_A");
    const MeasurementStrength strength =
        MeasurementStrength::from_g(parse_double(params.at("G"), "G"));
    const InterferometerRun run = run_interferometer(p_a, strength);

    CsvBuilder csv(
        "p_A,G,theta_deg,delta_theta_deg,output_angle_deg,shift_exact_deg,shift_approx_deg,"
        "postselect_prob,restoration_hwp_deg");
    csv.row({format_number(p_a),
             format_number(strength.g()),
             format_number(strength.theta() * kDegPerRad),
             format_number(delta_theta(strength) * kDegPerRad),
             format_number(run.output_angle * kDegPerRad),
             format_number(shift_angle_exact(p_a, strength) * kDegPerRad),
             format_number(shift_angle_approx(p_a, strength.g()) * kDegPerRad),
             format_number(run.postselect_prob),
             format_number(restoration_hwp_angle(run, strength.theta()) * kDegPerRad)});
    return csv.str();
}

std::string run_readout_sweep(const Resolved& params) {
    const double p_a = parse_double(params.at("p_A"), "p_A");
    const std::vector<double> grid = parse_grid(params.at("G"));
    const std::uint64_t trials = parse_u64(params.at("trials"), "trials");
    const std::uint64_t seed = parse_u64(params.at("seed"), "seed");
    const double background = parse_double(params.at("background_rate"), "background_rate");
    for (double g : grid) {
        if (!(g > 0.0) || g > 1.0) {
            throw std::invalid_argument("G: sweep strengths must lie in (0, 1]");
        }
    }

    if (trials == 0) {
        const ReadoutCurve curve = readout_curve(p_a, grid);
        CsvBuilder csv(kReadoutHeader);
        for (const ReadoutPoint& pt : curve.points) {
            csv.row({format_number(pt.g), format_number(pt.p_v), format_number(pt.r),
                     format_number(curve.p_a_nominal)});
        }
        return csv.str();
    }

    CsvBuilder csv(kCountsHeader);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const CountRecord rec = synthesize_counts(p_a, MeasurementStrength::from_g(grid[k]),
                                                  trials, seed + k, background);
        csv.row({format_number(rec.g), format_integer(rec.counts_h),
                 format_integer(rec.counts_v), format_integer(rec.trials),
                 format_integer(rec.seed)});
    }
    return csv.str();
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(current);
    return fields;
}

std::string run_fit(const Resolved& params) {
    const std::string& path = params.at("input");
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("input: cannot read '" + path + "'");
    }
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        lines.push_back(t);
    }
    if (lines.empty()) {
        throw std::invalid_argument("input: '" + path + "' is empty");
    }
    const std::string header = lines.front();
    lines.erase(lines.begin());

    FitResult fit{};
    std::size_t n_samples = 0;
    if (header == kReadoutHeader) {
        std::vector<ReadoutPoint> samples;
        for (const auto& line : lines) {
            const auto f = split_fields(line);
            if (f.size() != 4) {
                throw std::invalid_argument("input: malformed readout row '" + line + "'");
            }
            samples.push_back(ReadoutPoint{parse_double(f[0], "G"), parse_double(f[1], "P_V"),
                                           parse_double(f[2], "R")});
        }
        n_samples = samples.size();
        fit = fit_weak_value(samples);
    } else if (header == kCountsHeader) {
        std::vector<CountRecord> samples;
        for (const auto& line : lines) {
            const auto f = split_fields(line);
            if (f.size() != 5) {
                throw std::invalid_argument("input: malformed counts row '" + line + "'");
            }
            samples.push_back(CountRecord{parse_double(f[0], "G"),
                                          parse_u64(f[2], "counts_V"),
                                          parse_u64(f[1], "counts_H"),
                                          parse_u64(f[3], "trials"),
                                          parse_u64(f[4], "seed")});
        }
        n_samples = samples.size();
        fit = fit_weak_value(samples);
    } else {
        throw std::invalid_argument("input: unrecognized CSV header '" + header + "'");
    }

    CsvBuilder csv("p_A_hat,rms_residual,n_samples");
    csv.row({format_number(fit.p_a_hat), format_number(fit.rms_residual),
             format_integer(n_samples)});
    return csv.str();
}

std::string run_hom_sweep(const Resolved& params) {
    const double p_a2 = parse_double(params.at("p_A2"), "p_A2");
    const MeasurementStrength strength =
        MeasurementStrength::from_g(parse_double(params.at("G"), "G"));
    const double p_a1 = parse_double(params.at("p_A1"), "p_A1");
    const double hwp4 = parse_double(params.at("hwp4_deg"), "hwp4_deg") / kDegPerRad;

    const std::string& kappa_text = params.at("kappa");
    double ratio = parse_double(params.at("background_ratio"), "background_ratio");
    if (!kappa_text.empty()) {
        if (ratio != 0.0) {
            throw std::invalid_argument("kappa and background_ratio are mutually exclusive");
        }
        ratio = tied_background_ratio(parse_double(kappa_text, "kappa"), p_a2, strength);
    }

    PhotonPairConfig base = standard_pair(p_a2, strength);
    base.p_a1 = p_a1;
    base.hwp4_angle = hwp4;
    base.background_ratio = ratio;

    const std::vector<double> rel_deg = parse_grid(params.at("grid"));
    std::vector<double> hwp5_grid;
    hwp5_grid.reserve(rel_deg.size());
    for (double rel : rel_deg) {
        hwp5_grid.push_back(strength.theta() + rel / kDegPerRad);
    }
    const VisibilitySweep sweep = visibility_sweep(base, hwp5_grid);

    CsvBuilder csv("hwp5_deg,relative_deg,visibility,p_A2,G,background_ratio");
    for (std::size_t k = 0; k < sweep.hwp5_angles.size(); ++k) {
        csv.row({format_number(sweep.hwp5_angles[k] * kDegPerRad),
                 format_number(sweep.relative_angles[k] * kDegPerRad),
                 format_number(sweep.visibilities[k]),
                 format_number(p_a2),
                 format_number(strength.g()),
                 format_number(ratio)});
    }
    const SymmetricAngleReport marks = symmetric_angle_report(p_a2, strength);
    csv.comment_row("argmax_hwp5_deg", format_number(sweep.argmax_angle * kDegPerRad));
    csv.comment_row("argmax_relative_deg", format_number(sweep.argmax_relative * kDegPerRad));
    csv.comment_row("max_visibility", format_number(sweep.max_visibility));
    csv.comment_row("mark_exact_deg", format_number(marks.exact * kDegPerRad));
    csv.comment_row("mark_symmetric_deg", format_number(marks.symmetric_mark * kDegPerRad));
    csv.comment_row("mark_small_g_deg", format_number(marks.small_g_mark * kDegPerRad));
    return csv.str();
}

std::string dispatch(const std::string& command, const Resolved& params) {
    if (command == "threebox") return run_threebox(params);
    if (command == "weakvalue") return run_weakvalue(params);
    if (command == "interferometer") return run_interferometer_cmd(params);
    if (command == "readout-sweep") return run_readout_sweep(params);
    if (command == "fit") return run_fit(params);
    if (command == "hom-sweep") return run_hom_sweep(params);
    throw std::invalid_argument("unknown command '" + command + "'");  // unreachable
}

// -------------------------------------------------------------------------
// Argument / config resolution

std::string sidecar_json(const std::string& command, const Resolved& params,
                         const std::string& output) {
    nlohmann::json j;
    j["command"] = command;
    j["output"] = output.empty() ? "stdout" : output;
    nlohmann::json p(nlohmann::json::value_t::object);
    for (const auto& [key, value] : params) p[key] = value;
    j["parameters"] = p;
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content, const char* what) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content) || !out.flush()) {
        throw std::invalid_argument(std::string(what) + ": cannot write '" + path + "'");
    }
}

int run_resolved(const std::string& command, const Resolved& params, std::ostream& out,
                 std::ostream& err) {
    const std::string csv = dispatch(command, params);
    const std::string output = params.at("output");
    const std::string sidecar = sidecar_json(command, params, output);
    if (output.empty()) {
        out << csv;
        err << sidecar;
    } else {
        write_file(output, csv, "output");
        write_file(output + ".summary.json", sidecar, "output");
    }
    return 0;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : spec) {
        if (c == ':') {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);

    if (parts.size() == 1) {
        return {parse_double(parts[0], "grid")};
    }
    if (parts.size() != 3) {
        throw std::invalid_argument("grid: expected start:stop:step, got '" + spec + "'");
    }
    const double start = parse_double(parts[0], "grid start");
    const double stop = parse_double(parts[1], "grid stop");
    const double step = parse_double(parts[2], "grid step");
    if (step == 0.0) {
        throw std::invalid_argument("grid: step must be nonzero");
    }
    if ((stop - start) * step < 0.0) {
        throw std::invalid_argument("grid: step runs away from stop");
    }
    const double span = (stop - start) / step;  // ≥ 0 by the check above
    if (span > 2e7) {
        throw std::invalid_argument("grid: more than 2e7 points");
    }
    // Inclusive of stop when it sits on the lattice within 1e-9.
    const std::size_t count = static_cast<std::size_t>(std::floor(span + 1e-9 / std::abs(step))) + 1;
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        grid.push_back(start + static_cast<double>(k) * step);
    }
    return grid;
}

std::string format_number(double value) {
    if (value == 0.0) value = 0.0;  // fold −0 into +0
    std::array<char, 40> buf;
    const auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
    if (ec != std::errc{}) {
        throw std::invalid_argument("format_number: unrepresentable value");
    }
    return std::string(buf.data(), ptr);
}

std::string format_integer(std::uint64_t value) {
    std::array<char, 24> buf;
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::invalid_argument("format_integer: unrepresentable value");
    }
    return std::string(buf.data(), ptr);
}

std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::invalid_argument("config: cannot read '" + path + "'");
    }
    std::map<std::string, std::string> config;
    std::string line;
    for (int line_no = 1; std::getline(in, line); ++line_no) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " has an empty key");
        }
        if (!config.emplace(key, value).second) {
            throw std::invalid_argument("config: duplicate key '" + key + "'");
        }
    }
    return config;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        std::vector<std::string> args(argv + 1, argv + argc);

        // Global help and the bare invocation, before any command schema.
        if (args.empty()) {
            err << usage_text();
            return 2;
        }
        if (args[0] == "--help" || args[0] == "-h") {
            out << usage_text();
            return 0;
        }

        std::string command;
        if (!args[0].empty() && args[0].front() != '-') {
            command = args[0];
            args.erase(args.begin());
            if (!find_command(command)) {
                err << "wvsim: unknown command '" << command << "'\n\n" << usage_text();
                return 2;
            }
        }

        // The config file may carry the command and any parameter; flags win.
        std::map<std::string, std::string> config;
        for (std::size_t k = 0; k < args.size(); ++k) {
            if (args[k] == "--config") {
                if (k + 1 >= args.size()) {
                    throw std::invalid_argument("--config: missing file path");
                }
                config = load_config(args[k + 1]);
                break;
            }
            if (args[k].rfind("--config=", 0) == 0) {
                config = load_config(args[k].substr(9));
                break;
            }
        }

        const auto config_command = config.find("command");
        if (command.empty()) {
            if (config_command == config.end()) {
                err << "wvsim: no command given\n\n" << usage_text();
                return 2;
            }
            command = config_command->second;
            if (!find_command(command)) {
                throw std::invalid_argument("config: unknown command '" + command + "'");
            }
        } else if (config_command != config.end() && config_command->second != command) {
            throw std::invalid_argument("config: command '" + config_command->second +
                                        "' disagrees with CLI command '" + command + "'");
        }
        const CommandSpec& spec = *find_command(command);

        // Reject config keys outside this command's schema.
        for (const auto& [key, value] : config) {
            if (key == "command" || key == "output") continue;
            const bool known = std::any_of(spec.params.begin(), spec.params.end(),
                                           [&](const ParamSpec& p) { return key == p.key; });
            if (!known) {
                throw std::invalid_argument("config: unknown key '" + key + "' for command '" +
                                            command + "'");
            }
        }

        CLI::App app{spec.help, "wvsim " + command};
        std::string config_path;
        std::map<std::string, std::string> flag_values;
        app.add_option("--config", config_path, "flat key = value run description");
        app.add_option("--output", flag_values["output"],
                       "CSV destination; summary sidecar lands beside it (default stdout)");
        for (const ParamSpec& p : spec.params) {
            app.add_option("--" + std::string(p.key), flag_values[p.key], p.help);
        }

        std::vector<const char*> cargv;
        const std::string prog = "wvsim " + command;
        cargv.push_back(prog.c_str());
        for (const auto& a : args) cargv.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(cargv.size()), cargv.data());
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return 0;
        } catch (const CLI::ParseError& e) {
            err << "wvsim: " << e.what() << '\n';
            return 2;
        }

        Resolved resolved;
        const auto resolve_one = [&](const std::string& key, bool required,
                                     const std::string& fallback) {
            if (app.count("--" + key) > 0) {
                resolved[key] = flag_values[key];
            } else if (const auto it = config.find(key); it != config.end()) {
                resolved[key] = it->second;
            } else if (!required) {
                resolved[key] = fallback;
            } else {
                throw std::invalid_argument(command + ": missing required parameter --" + key);
            }
        };
        resolve_one("output", false, "");
        for (const ParamSpec& p : spec.params) {
            resolve_one(p.key, p.required, p.fallback);
        }

        return run_resolved(command, resolved, out, err);
    } catch (const std::domain_error& e) {
        err << "wvsim: " << e.what() << '\n';
        return 3;
    } catch (const std::logic_error& e) {
        err << "wvsim: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "wvsim: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace wvsim::cli
