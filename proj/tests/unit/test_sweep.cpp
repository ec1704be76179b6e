#include "pblockade/core_model.hpp"
#include "pblockade/errors.hpp"
#include "pblockade/figures.hpp"
#include "pblockade/optimizer.hpp"
#include "pblockade/sweep.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace pblockade;

namespace {

SweepSpec detuning_spec(double lo, double hi, std::size_t n)
{
    SweepSpec s;
    s.axis1 = {"delta_c", lo, hi, n};
    s.optimal_J_theta = true;
    return s;
}

std::string csv_1d(const SweepResult& r)
{
    std::ostringstream os;
    write_sweep_1d_csv(os, r);
    return os.str();
}

std::size_t row_argmin(const Grid2D& g, std::size_t i)
{
    std::size_t best = 0;
    double val = INFINITY;
    for (std::size_t j = 0; j < g.axis2.n; ++j) {
        if (g.at(i, j) && *g.at(i, j) < val) {
            val = *g.at(i, j);
            best = j;
        }
    }
    return best;
}

const FigureFile& file_of(const Figure& f, const std::string& name)
{
    for (const auto& file : f.files) {
        if (file.filename == name) {
            return file;
        }
    }
    throw std::runtime_error("missing " + name);
}

// Values of one named column of a figure CSV (comment lines skipped).
std::vector<std::optional<double>> column(const std::string& csv, const std::string& name)
{
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> header;
    std::vector<std::optional<double>> out;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        if (header.empty()) {
            header = cells;
            continue;
        }
        const auto k = std::find(header.begin(), header.end(), name) - header.begin();
        if (static_cast<std::size_t>(k) >= header.size()) {
            throw std::runtime_error("no column " + name);
        }
        if (cells[k].empty()) {
            out.emplace_back();
        } else {
            out.emplace_back(std::stod(cells[k]));
        }
    }
    return out;
}

} // namespace

TEST_CASE("sweep spec validation")
{
    auto message = [](SweepSpec s) {
        try {
            s.validate();
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    SweepSpec s = detuning_spec(-1, 1, 11);
    CHECK(message(s).empty());
    s.axis1.name = "bogus";
    CHECK(message(s).find("axis1") != std::string::npos);
    s = detuning_spec(-1, 1, 1);
    CHECK(message(s).find("2 points") != std::string::npos);
    s = detuning_spec(1, -1, 5);
    CHECK(message(s).find("min < max") != std::string::npos);
    s = detuning_spec(-1, 1, 5);
    s.axis2 = SweepAxis{"delta_c", 0, 1, 3};
    CHECK(message(s).find("axis2") != std::string::npos);
    s.axis2 = SweepAxis{"theta", 0, 1, 3};
    CHECK(message(s).find("optimal_J_theta") != std::string::npos);
    s.optimal_J_theta = false;
    CHECK(message(s).empty());

    CHECK_THROWS_AS(parse_observable("g3"), ConfigError);
    CHECK(parse_observable("n_paper") == Observable::NPaper);
    CHECK_THROWS_AS(parse_direction_set("up"), ConfigError);
    CHECK(directions_of(parse_direction_set("both")).size() == 2);
    CHECK_THROWS_AS(run_sweep(detuning_spec(1, -1, 5), preset_params()), ConfigError);
}

TEST_CASE("axis parameters")
{
    const SystemParams p = preset_params();
    CHECK(set_parameter(p, "delta_c", 1.5).delta_c == 1.5);
    const auto k = set_parameter(p, "kappa1", 0.7);
    CHECK(k.kappa1 == 0.7);
    CHECK(k.kappa2 == doctest::Approx(1.3));
    CHECK(set_parameter(p, "kappa2", 0.4).kappa1 == doctest::Approx(1.6));
    const auto t = set_parameter(p, "theta", 1.1);
    CHECK(relative_phase(t) == doctest::Approx(1.1).epsilon(1e-14));
    const auto j = set_parameter(t, "J", -2.0);
    CHECK(raman_coupling(j) == -2.0);
    CHECK(relative_phase(j) == doctest::Approx(1.1).epsilon(1e-14));
    CHECK_THROWS_AS(set_parameter(p, "direction", 1.0), ConfigError);
    const auto& keys = sweepable_keys();
    CHECK(std::find(keys.begin(), keys.end(), "J") != keys.end());
    CHECK(std::find(keys.begin(), keys.end(), "b_in") != keys.end());
}

TEST_CASE("forward and backward dips sit at their own optima")
{
    const auto r = run_sweep(detuning_spec(-4, 4, 601), preset_params());
    REQUIRE(r.directions.size() == 2);
    const double step = 8.0 / 600;
    const auto f = r.grid(Direction::Forward).argmin();
    const auto b = r.grid(Direction::Backward).argmin();
    REQUIRE(f);
    REQUIRE(b);
    CHECK(std::abs(r.grid(Direction::Forward).axis1.value(f->i) - 0.8502788316577846) <= step);
    CHECK(std::abs(r.grid(Direction::Backward).axis1.value(b->i) + 2.524672417640921) <= step);
    CHECK(f->value < 1e-3);
}

TEST_CASE("parallel and serial sweeps write identical bytes")
{
    SweepSpec s = detuning_spec(-4, 4, 121);
    const auto a = csv_1d(run_sweep(s, preset_params(), 1));
    const auto b = csv_1d(run_sweep(s, preset_params(), 4));
    CHECK(a == b);

    s.optimal_J_theta = false;
    s.axis2 = SweepAxis{"J", -3, 3, 31};
    s.directions = DirectionSet::Backward;
    s.observable = Observable::P1;
    const auto r1 = run_sweep(s, preset_params(), 1);
    const auto r3 = run_sweep(s, preset_params(), 3);
    std::ostringstream x, y;
    write_sweep_csv(x, r1, Direction::Backward);
    write_sweep_csv(y, r3, Direction::Backward);
    CHECK(x.str() == y.str());
    CHECK(x.str().find("# observable=p1") != std::string::npos);
    CHECK(x.str().find("# version=pblockade 1.0.0") != std::string::npos);
    CHECK_THROWS_AS(r1.grid(Direction::Forward), DomainError);
}

TEST_CASE("config hash follows the parameters")
{
    SweepSpec s = detuning_spec(-1, 1, 5);
    const auto a = run_sweep(s, preset_params());
    s.overrides.push_back({"g", "9", "flag"});
    const auto b = run_sweep(s, preset_params());
    CHECK(a.config_hash != b.config_hash);
    CHECK(b.base.g == 9.0);
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("blockade locus follows the resonant detuning")
{
    SweepSpec s;
    s.axis1 = {"delta_e", -1.5, -0.2, 14};
    s.axis2 = SweepAxis{"delta_c", -4, 4, 401};
    s.directions = DirectionSet::Forward;
    s.optimal_J_theta = true;
    const auto r = run_sweep(s, preset_params());
    const auto& g = r.grid(Direction::Forward);
    const double step = g.axis2.step();
    int checked = 0;
    for (std::size_t i = 0; i < g.axis1.n; ++i) {
        SystemParams p = preset_params();
        p.delta_e = g.axis1.value(i);
        const double opt = solve_optimal(p, false).delta_c_opt;
        if (std::abs(opt) > 4) {
            continue;
        }
        CHECK(std::abs(g.axis2.value(row_argmin(g, i)) - opt) <= step);
        ++checked;
    }
    CHECK(checked > 5);
}

TEST_CASE("broad blockade at g = 6.7 for kappa1 < 0.4")
{
    SystemParams base = preset_params();
    base.g = 6.7;
    SweepSpec s;
    s.axis1 = {"kappa1", 0.05, 0.39, 18};
    s.axis2 = SweepAxis{"delta_c", -4, 4, 161};
    s.directions = DirectionSet::Forward;
    s.optimal_J_theta = true;
    const auto r = run_sweep(s, base);
    const auto& g = r.grid(Direction::Forward);
    for (std::size_t i = 0; i < g.axis1.n; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < g.axis2.n; ++j) {
            worst = std::max(worst, g.at(i, j).value_or(INFINITY));
        }
        INFO("kappa1 = " << g.axis1.value(i) << ", max g2 = " << worst);
        CHECK(worst < 1.0);
    }
}

TEST_CASE("figures")
{
    CHECK(figure_names().size() == 13);
    CHECK_THROWS_AS(make_figure("fig4"), UnknownFigure);

    const auto a = make_figure("fig3b");
    const auto b = make_figure("fig3b");
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        CHECK(a.files[i].content == b.files[i].content);
    }

    const auto c = make_figure("fig3c");
    const auto& csv = file_of(c, "fig3c.csv").content;
    auto minimum = [](const std::vector<std::optional<double>>& v) {
        double m = INFINITY;
        for (const auto& x : v) {
            if (x) {
                m = std::min(m, *x);
            }
        }
        return m;
    };
    std::vector<std::string> cols;
    {
        std::istringstream in(csv);
        std::string line;
        while (std::getline(in, line) && line[0] == '#') {
        }
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            cols.push_back(cell);
        }
    }
    REQUIRE(cols.size() == 3);
    const double on = minimum(column(csv, cols[1]));
    const double off = minimum(column(csv, cols[2]));
    CHECK(on < 1e-2);
    CHECK(off > 1e-2);
    CHECK(off < 1.0);

    const auto f5 = make_figure("fig5b");
    const auto fwd = column(file_of(f5, "fig5b.csv").content, "g2_forward");
    CHECK(fwd.size() == 601);
    for (const auto& v : fwd) {
        REQUIRE(v);
        CHECK(*v < 1.0);
    }

    const auto dir = std::filesystem::temp_directory_path() / "pblockade_fig_test";
    std::filesystem::remove_all(dir);
    write_figure(a, dir);
    for (const auto& file : a.files) {
        std::ifstream in(dir / file.filename, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str() == file.content);
    }
    std::filesystem::remove_all(dir);
}
