// Command-line front end: single-point statistics, sweeps, optimal-point
// solves, nonreciprocity search, full-model validation and figure presets.

#include "pblockade/config.hpp"
#include "pblockade/errors.hpp"
#include "pblockade/figures.hpp"
#include "pblockade/full_model.hpp"
#include "pblockade/optimizer.hpp"
#include "pblockade/steady_state.hpp"
#include "pblockade/sweep.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace pblockade;

namespace {

constexpr int exit_config = 1;
constexpr int exit_numerical = 2;

// Options shared by every verb.
struct Common {
    std::string config;
    std::map<std::string, std::string> values;   // by canonical key
    std::string out = ".";
    unsigned jobs = 0;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("--config", c.config, "key = value parameter file, applied before flags");
    cmd->add_option("--out", c.out, "output directory");
    cmd->add_option("--jobs", c.jobs, "worker threads (0 = hardware parallelism)");
    for (const auto& key : parameter_keys()) {
        std::string names = "--" + key;
        std::string lower = key;
        for (auto& ch : lower) {
            ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        }
        if (lower != key) {
            names += ",--" + lower;
        }
        cmd->add_option_function<std::string>(
            names, [&c, key](const std::string& v) { c.values[key] = v; }, "parameter " + key);
    }
}

SystemParams load_params(const Common& c)
{
    std::vector<Setting> settings;
    if (!c.config.empty()) {
        settings = read_config_file(c.config);
    }
    for (const auto& key : parameter_keys()) {
        if (auto it = c.values.find(key); it != c.values.end()) {
            settings.push_back({key, it->second, "--" + key});
        }
    }
    return apply_settings(preset_params(), settings);
}

SweepAxis parse_axis(const std::string& text, const char* label)
{
    // name:min:max:n
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) {
        parts.push_back(item);
    }
    if (parts.size() != 4) {
        throw ConfigError(std::string(label) + ": expected name:min:max:n, got '" + text + "'");
    }
    SweepAxis a;
    a.name = parts[0];
    a.min = parse_double(parts[1], std::string(label) + " min");
    a.max = parse_double(parts[2], std::string(label) + " max");
    const double n = parse_double(parts[3], std::string(label) + " n");
    if (!(n >= 2.0) || n != std::floor(n) || n > 1e7) {
        throw ConfigError(std::string(label) + ": n must be an integer >= 2");
    }
    a.n = static_cast<std::size_t>(n);
    return a;
}

void write_file(const fs::path& path, const std::string& content)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << content;
}

std::string opt_str(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string();
}

void print_stats(std::ostream& os, const std::string& prefix, const SystemParams& p)
{
    try {
        const PhotonStats s = analytic_stats(p);
        os << prefix << "p1=" << format_double(s.p1) << '\n'
           << prefix << "p2=" << format_double(s.p2) << '\n'
           << prefix << "g2=" << opt_str(s.g2) << '\n'
           << prefix << "n_paper=" << format_double(s.n_cavity_paper) << '\n'
           << prefix << "n_full=" << format_double(s.n_cavity_full) << '\n'
           << prefix << "valid=true\n";
    } catch (const SingularDenominator& e) {
        os << prefix << "valid=false\n";
        std::cerr << "warning: " << prefix << e.what() << '\n';
    }
}

void print_point(std::ostream& os, const std::string& prefix, const OptimalPoint& pt)
{
    os << prefix << "J=" << format_double(pt.J) << '\n'
       << prefix << "theta=" << format_double(pt.theta) << '\n'
       << prefix << "delta_c_opt=" << format_double(pt.delta_c_opt) << '\n'
       << prefix << "residual=" << format_double(pt.residual) << '\n'
       << prefix << "direction=" << to_string(pt.direction) << '\n';
}

void report_warnings(const SystemParams& p)
{
    for (auto w : check_regime(p)) {
        std::cerr << "warning: " << describe(w) << '\n';
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Photon blockade in an asymmetric cavity with a driven Lambda atom"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version));

    Common common;

    auto* g2 = app.add_subcommand("g2", "steady-state photon statistics for both input ports");
    add_common(g2, common);

    auto* sweep = app.add_subcommand("sweep", "1-D or 2-D parameter sweep written as CSV and SVG");
    add_common(sweep, common);
    std::string axis1, axis2, directions = "both", observable = "g2";
    bool optimal = false;
    sweep->add_option("--axis1", axis1, "name:min:max:n")->required();
    sweep->add_option("--axis2", axis2, "name:min:max:n");
    sweep->add_option("--directions", directions, "forward, backward or both");
    sweep->add_option("--observable", observable, "g2, n_paper, n_full, p1 or p2");
    sweep->add_flag("--optimal-J-theta", optimal, "use the joint optimum (J, theta) at every point");

    auto* optimize = app.add_subcommand("optimize", "solve for the optimal blockade point");
    add_common(optimize, common);
    bool fixed = false;
    optimize->add_flag("--fixed-delta-c", fixed, "keep delta_c fixed instead of solving for it");

    auto* nonrec = app.add_subcommand("nonreciprocal", "forward-blockaded, backward-bunched operating point");
    add_common(nonrec, common);
    double target = 0.0;
    double jmin = 1.5, jmax = 5.0;
    std::size_t resolution = 201;
    nonrec->add_option("--target", target, "cavity detuning of the operating point");
    nonrec->add_option("--J-min", jmin, "smallest |J| considered");
    nonrec->add_option("--J-max", jmax, "largest |J| considered");
    nonrec->add_option("--resolution", resolution, "scan points per axis");

    auto* validate_cmd = app.add_subcommand("validate-full", "compare the full three-level model with the effective one");
    add_common(validate_cmd, common);
    double tolerance = 0.2;
    int n_max = 2;
    validate_cmd->add_option("--tolerance", tolerance, "relative g2 difference accepted");
    validate_cmd->add_option("--n-max", n_max, "photon cutoff of the full model")->check(CLI::Range(1, 4));

    auto* figure = app.add_subcommand("figure", "regenerate a built-in figure");
    add_common(figure, common);
    std::string figure_name;
    figure->add_option("name", figure_name, "figure name, e.g. fig2a")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        const fs::path out_dir = common.out;
        if (g2->parsed()) {
            const SystemParams p = load_params(common);
            report_warnings(p);
            SystemParams f = p, b = p;
            f.direction = Direction::Forward;
            b.direction = Direction::Backward;
            std::cout << "delta_c=" << format_double(p.delta_c) << '\n';
            print_stats(std::cout, "forward_", f);
            print_stats(std::cout, "backward_", b);
        } else if (sweep->parsed()) {
            const SystemParams p = load_params(common);
            SweepSpec spec;
            spec.axis1 = parse_axis(axis1, "axis1");
            if (!axis2.empty()) {
                spec.axis2 = parse_axis(axis2, "axis2");
            }
            spec.directions = parse_direction_set(directions);
            spec.observable = parse_observable(observable);
            spec.optimal_J_theta = optimal;
            const SweepResult r = run_sweep(spec, p, common.jobs);
            if (r.two_dimensional()) {
                for (Direction d : r.directions) {
                    std::ostringstream csv;
                    write_sweep_csv(csv, r, d);
                    const std::string stem = "sweep_" + std::string(to_string(d));
                    write_file(out_dir / (stem + ".csv"), csv.str());
                    write_file(out_dir / (stem + ".svg"), sweep_svg(r, d));
                    std::cout << (out_dir / (stem + ".csv")).string() << '\n';
                }
            } else {
                std::ostringstream csv;
                write_sweep_1d_csv(csv, r);
                write_file(out_dir / "sweep.csv", csv.str());
                write_file(out_dir / "sweep.svg", sweep_svg(r, r.directions.front()));
                std::cout << (out_dir / "sweep.csv").string() << '\n';
            }
        } else if (optimize->parsed()) {
            const SystemParams p = load_params(common);
            report_warnings(p);
            const auto roots = find_optimal_roots(p, fixed);
            const OptimalPoint best = solve_optimal(p, fixed);
            print_point(std::cout, "", best);
            const SystemParams q = apply_optimal(p, best);
            print_stats(std::cout, "", q);
            std::cout << "roots=" << roots.size() << '\n';
            for (std::size_t i = 0; i < roots.size(); ++i) {
                print_point(std::cout, "root" + std::to_string(i + 1) + "_", roots[i]);
            }
        } else if (nonrec->parsed()) {
            const SystemParams p = load_params(common);
            NonreciprocalOptions opt;
            opt.J_abs_min = jmin;
            opt.J_abs_max = jmax;
            opt.resolution = resolution;
            opt.jobs = common.jobs;
            const NonreciprocalPoint np = nonreciprocal_point(p, target, opt);
            std::cout << "delta_c=" << format_double(np.report.delta_c) << '\n'
                      << "J=" << format_double(np.J) << '\n'
                      << "theta=" << format_double(np.theta) << '\n'
                      << "polished=" << (np.polished ? "true" : "false") << '\n'
                      << "g2_forward=" << opt_str(np.report.g2_forward) << '\n'
                      << "g2_backward=" << opt_str(np.report.g2_backward) << '\n'
                      << "contrast=" << opt_str(np.report.contrast) << '\n'
                      << "nonreciprocal=" << (np.nonreciprocal ? "true" : "false") << '\n';
            if (!np.nonreciprocal) {
                std::cerr << "warning: backward g2 <= 1 at the selected point (not nonreciprocal)\n";
            }
        } else if (validate_cmd->parsed()) {
            const SystemParams p = load_params(common);
            report_warnings(p);
            const ValidationReport r = validate_effective(p, tolerance, n_max);
            if (!r.regime_ok) {
                std::cerr << "warning: |delta_p/g| <= 5, adiabatic elimination not expected to hold\n";
            }
            write_report(std::cout, r);
        } else if (figure->parsed()) {
            const Figure fig = make_figure(figure_name, common.jobs);
            write_figure(fig, out_dir);
            for (const auto& f : fig.files) {
                std::cout << (out_dir / f.filename).string() << '\n';
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    } catch (const DivisionByZero& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
    return 0;
}
