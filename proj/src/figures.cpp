#include "pblockade/figures.hpp"

#include "pblockade/errors.hpp"
#include "pblockade/optimizer.hpp"
#include "pblockade/steady_state.hpp"
#include "pblockade/svg.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace pblockade {

namespace {

constexpr std::size_t line_points = 601;
constexpr std::size_t map_points = 201;

SweepSpec detuning_spec(DirectionSet dirs, Observable obs, bool optimal)
{
    SweepSpec s;
    s.axis1 = {"delta_c", -4.0, 4.0, line_points};
    s.directions = dirs;
    s.observable = obs;
    s.optimal_J_theta = optimal;
    return s;
}

std::vector<Series> series_of(const SweepResult& r, const std::string& suffix = {})
{
    std::vector<Series> out;
    for (std::size_t d = 0; d < r.directions.size(); ++d) {
        const Grid2D& g = r.grids[d];
        Series s;
        s.label = std::string(to_string(r.directions[d])) + suffix;
        s.x = g.axis1.values();
        for (std::size_t i = 0; i < g.axis1.n; ++i) {
            s.y.push_back(g.at(i, 0));
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::string axis_label(const std::string& name)
{
    if (name == "delta_c") return "cavity detuning / kappa";
    if (name == "delta_e") return "effective detuning of e / kappa";
    if (name == "g") return "atom-cavity coupling / kappa";
    if (name == "kappa1") return "left mirror decay / kappa";
    if (name == "J") return "Raman coupling / kappa";
    if (name == "theta") return "relative phase (rad)";
    return name;
}

std::string line_svg(const std::string& title, const std::vector<Series>& series, const std::string& x,
                     Observable obs)
{
    std::ostringstream os;
    write_line_svg(os, {title, axis_label(x), std::string(to_string(obs))}, series, obs == Observable::G2);
    return os.str();
}

std::string comment_lines(const std::vector<std::pair<std::string, std::string>>& kv)
{
    std::string s;
    for (const auto& [k, v] : kv) {
        s += "# " + k + '=' + v + '\n';
    }
    return s;
}

// Multi-column CSV for series sharing one x grid.
std::string series_csv(const std::string& x_name, const std::vector<Series>& series, const std::string& prefix,
                       const std::vector<std::pair<std::string, std::string>>& header)
{
    std::ostringstream os;
    os << comment_lines(header) << x_name;
    for (const auto& s : series) {
        os << ',' << prefix << s.label;
    }
    os << '\n';
    for (std::size_t i = 0; i < series.front().x.size(); ++i) {
        os << format_double(series.front().x[i]);
        for (const auto& s : series) {
            os << ',';
            if (s.y[i]) {
                os << format_double(*s.y[i]);
            }
        }
        os << '\n';
    }
    return os.str();
}

std::vector<std::pair<std::string, std::string>> point_header(const std::string& tag, const OptimalPoint& pt)
{
    return {{tag + "_J", format_double(pt.J)},
            {tag + "_theta", format_double(pt.theta)},
            {tag + "_delta_c_opt", format_double(pt.delta_c_opt)}};
}

Figure detuning_figure(const std::string& name, Observable obs, SystemParams base, unsigned jobs)
{
    const SweepResult r = run_sweep(detuning_spec(DirectionSet::Both, obs, true), base, jobs);
    auto header = provenance(r);
    for (Direction d : {Direction::Forward, Direction::Backward}) {
        SystemParams q = base;
        q.direction = d;
        const auto pt = solve_optimal(q, false);
        for (auto& kv : point_header(std::string(to_string(d)), pt)) {
            header.push_back(kv);
        }
    }
    const auto series = series_of(r);
    const std::string prefix = std::string(to_string(obs)) + '_';
    return {name,
            {{name + ".csv", series_csv("delta_c", series, prefix, header)},
             {name + ".svg", line_svg(name, series, "delta_c", obs)}}};
}

// 2-D forward map with (J, theta) optimal along the first axis and the
// resonant detuning of that optimum as overlay.
Figure optimal_map(const std::string& name, const SweepAxis& axis, SystemParams base, unsigned jobs)
{
    SweepSpec s;
    s.axis1 = axis;
    s.axis2 = SweepAxis{"delta_c", -4.0, 4.0, map_points};
    s.directions = DirectionSet::Forward;
    s.optimal_J_theta = true;
    const SweepResult r = run_sweep(s, base, jobs);
    const Grid2D& g = r.grid(Direction::Forward);

    Series overlay;
    overlay.label = "resonant detuning";
    std::ostringstream ov;
    ov << axis.name << ",J,theta,delta_c_opt\n";
    for (std::size_t i = 0; i < g.axis1.n; ++i) {
        const double v = g.axis1.value(i);
        overlay.x.push_back(v);
        std::optional<OptimalPoint> pt;
        try {
            SystemParams q = set_parameter(base, axis.name, v);
            q.direction = Direction::Forward;
            pt = solve_optimal(q, false);
        } catch (const NumericalError&) {
        } catch (const DomainError&) {
        }
        overlay.y.push_back(pt ? std::optional<double>(pt->delta_c_opt) : std::nullopt);
        ov << format_double(v);
        if (pt) {
            ov << ',' << format_double(pt->J) << ',' << format_double(pt->theta) << ','
               << format_double(pt->delta_c_opt);
        } else {
            ov << ",,,";
        }
        ov << '\n';
    }
    std::ostringstream csv, svg;
    write_sweep_csv(csv, r, Direction::Forward);
    write_heatmap_svg(svg, {name + " forward g2", axis_label(axis.name), axis_label("delta_c")}, g, true, overlay);
    return {name, {{name + ".csv", csv.str()}, {name + "_overlay.csv", ov.str()}, {name + ".svg", svg.str()}}};
}

Figure fig3b(unsigned jobs)
{
    (void)jobs;
    const SystemParams base = preset_params();
    Series amp;
    amp.label = "E_he";
    std::ostringstream os;
    os << comment_lines({{"version", std::string(tool_version)}});
    os << "delta_e,J,theta,delta_c_opt,E_he\n";
    for (double de : linspace(-2.0, 2.0, map_points)) {
        amp.x.push_back(de);
        std::optional<OptimalPoint> pt;
        try {
            SystemParams q = base;
            q.delta_e = de;
            pt = solve_optimal(q, false);
        } catch (const NumericalError&) {
        }
        os << format_double(de);
        if (pt) {
            const double drive = std::abs(pt->J) * base.delta_p / base.g;
            amp.y.push_back(drive);
            os << ',' << format_double(pt->J) << ',' << format_double(pt->theta) << ','
               << format_double(pt->delta_c_opt) << ',' << format_double(drive);
        } else {
            amp.y.push_back(std::nullopt);
            os << ",,,,";
        }
        os << '\n';
    }
    std::ostringstream svg;
    write_line_svg(svg, {"fig3b optimal atomic drive", axis_label("delta_e"), "E_he / kappa"}, {amp}, false);
    return {"fig3b", {{"fig3b.csv", os.str()}, {"fig3b.svg", svg.str()}}};
}

// Forward curve with the microwave on (joint optimum) and off (same J, theta).
Figure microwave_figure(const std::string& name, Observable obs, unsigned jobs)
{
    const SystemParams base = preset_params();
    const OptimalPoint pt = solve_optimal(base, false);
    const SystemParams on = with_coupling(base, pt.J, pt.theta);
    SystemParams off = on;
    off.E_eg = 0.0;

    const auto spec = detuning_spec(DirectionSet::Forward, obs, false);
    auto s_on = series_of(run_sweep(spec, on, jobs), "_microwave_on");
    const SweepResult r_off = run_sweep(spec, off, jobs);
    const auto s_off = series_of(r_off, "_microwave_off");
    s_on.push_back(s_off.front());

    auto header = provenance(r_off);
    for (auto& kv : point_header("forward", pt)) {
        header.push_back(kv);
    }
    const std::string prefix = std::string(to_string(obs)) + '_';
    return {name,
            {{name + ".csv", series_csv("delta_c", s_on, prefix, header)},
             {name + ".svg", line_svg(name, s_on, "delta_c", obs)}}};
}

Figure jtheta_figure(const std::string& name, Direction d, unsigned jobs)
{
    SweepSpec s;
    s.axis1 = {"J", -5.0, 5.0, map_points};
    s.axis2 = SweepAxis{"theta", -std::numbers::pi, std::numbers::pi, map_points};
    s.directions = d == Direction::Forward ? DirectionSet::Forward : DirectionSet::Backward;
    const SweepResult r = run_sweep(s, preset_params(), jobs);
    std::ostringstream csv, svg;
    write_sweep_csv(csv, r, d);
    write_heatmap_svg(svg, {name + " " + std::string(to_string(d)) + " g2", axis_label("J"), axis_label("theta")},
                      r.grid(d), true);
    return {name, {{name + ".csv", csv.str()}, {name + ".svg", svg.str()}}};
}

Figure nonreciprocal_figure(const std::string& name, double target, unsigned jobs)
{
    const SystemParams base = preset_params();
    NonreciprocalOptions opt;
    opt.jobs = jobs;
    const NonreciprocalPoint np = nonreciprocal_point(base, target, opt);
    const SweepResult r =
        run_sweep(detuning_spec(DirectionSet::Both, Observable::G2, false), with_coupling(base, np.J, np.theta), jobs);
    auto header = provenance(r);
    header.push_back({"target_delta_c", format_double(target)});
    header.push_back({"J", format_double(np.J)});
    header.push_back({"theta", format_double(np.theta)});
    header.push_back({"nonreciprocal", np.nonreciprocal ? "true" : "false"});
    const auto series = series_of(r);
    return {name,
            {{name + ".csv", series_csv("delta_c", series, "g2_", header)},
             {name + ".svg", line_svg(name, series, "delta_c", Observable::G2)}}};
}

SystemParams coupling_6p7()
{
    SystemParams p = preset_params();
    p.g = 6.7;
    return p;
}

} // namespace

const std::vector<std::string>& figure_names()
{
    static const std::vector<std::string> names = {"fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d", "fig5a",
                                                   "fig5b", "fig5c", "fig6a", "fig6b", "fig6c", "fig6d"};
    return names;
}

Figure make_figure(std::string_view name, unsigned jobs)
{
    using Maker = std::function<Figure(unsigned)>;
    static const std::map<std::string, Maker, std::less<>> makers = {
        {"fig2a", [](unsigned j) { return detuning_figure("fig2a", Observable::G2, preset_params(), j); }},
        {"fig2b", [](unsigned j) { return detuning_figure("fig2b", Observable::NPaper, preset_params(), j); }},
        {"fig3a", [](unsigned j) { return optimal_map("fig3a", {"delta_e", -2.0, 2.0, map_points}, preset_params(), j); }},
        {"fig3b", fig3b},
        {"fig3c", [](unsigned j) { return microwave_figure("fig3c", Observable::G2, j); }},
        {"fig3d", [](unsigned j) { return microwave_figure("fig3d", Observable::NPaper, j); }},
        {"fig5a", [](unsigned j) { return optimal_map("fig5a", {"g", 2.0, 14.0, map_points}, preset_params(), j); }},
        {"fig5b", [](unsigned j) { return detuning_figure("fig5b", Observable::G2, coupling_6p7(), j); }},
        {"fig5c", [](unsigned j) { return optimal_map("fig5c", {"kappa1", 0.05, 1.95, map_points}, coupling_6p7(), j); }},
        {"fig6a", [](unsigned j) { return jtheta_figure("fig6a", Direction::Forward, j); }},
        {"fig6b", [](unsigned j) { return jtheta_figure("fig6b", Direction::Backward, j); }},
        {"fig6c", [](unsigned j) { return nonreciprocal_figure("fig6c", 0.0, j); }},
        {"fig6d", [](unsigned j) { return nonreciprocal_figure("fig6d", 2.5, j); }},
    };
    const auto it = makers.find(name);
    if (it == makers.end()) {
        std::string known;
        for (const auto& n : figure_names()) {
            known += (known.empty() ? "" : ", ") + n;
        }
        throw UnknownFigure("unknown figure '" + std::string(name) + "'; expected one of " + known);
    }
    return it->second(jobs);
}

void write_figure(const Figure& fig, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    for (const auto& f : fig.files) {
        std::ofstream out(dir / f.filename, std::ios::binary);
        if (!out) {
            throw ConfigError("cannot write " + (dir / f.filename).string());
        }
        out << f.content;
    }
}

std::string sweep_svg(const SweepResult& r, Direction d)
{
    std::ostringstream os;
    const bool log = r.spec.observable == Observable::G2;
    if (r.two_dimensional()) {
        write_heatmap_svg(os,
                          {std::string(to_string(r.spec.observable)) + " " + std::string(to_string(d)),
                           axis_label(r.spec.axis1.name), axis_label(r.spec.axis2->name)},
                          r.grid(d), log);
    } else {
        write_line_svg(os, {std::string(to_string(r.spec.observable)), axis_label(r.spec.axis1.name),
                            std::string(to_string(r.spec.observable))},
                       series_of(r), log);
    }
    return os.str();
}

} // namespace pblockade
