#include "pblockade/sweep.hpp"

#include "pblockade/errors.hpp"
#include "pblockade/optimizer.hpp"
#include "pblockade/parallel.hpp"
#include "pblockade/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

namespace pblockade {

std::string_view to_string(Observable o)
{
    switch (o) {
    case Observable::G2: return "g2";
    case Observable::NPaper: return "n_paper";
    case Observable::NFull: return "n_full";
    case Observable::P1: return "p1";
    case Observable::P2: return "p2";
    }
    return "g2";
}

std::string_view to_string(DirectionSet d)
{
    switch (d) {
    case DirectionSet::Forward: return "forward";
    case DirectionSet::Backward: return "backward";
    case DirectionSet::Both: return "both";
    }
    return "both";
}

Observable parse_observable(std::string_view s)
{
    for (auto o : {Observable::G2, Observable::NPaper, Observable::NFull, Observable::P1, Observable::P2}) {
        if (to_string(o) == s) {
            return o;
        }
    }
    throw ConfigError("observable: expected g2, n_paper, n_full, p1 or p2, got '" + std::string(s) + "'");
}

DirectionSet parse_direction_set(std::string_view s)
{
    for (auto d : {DirectionSet::Forward, DirectionSet::Backward, DirectionSet::Both}) {
        if (to_string(d) == s) {
            return d;
        }
    }
    throw ConfigError("directions: expected forward, backward or both, got '" + std::string(s) + "'");
}

std::vector<Direction> directions_of(DirectionSet d)
{
    switch (d) {
    case DirectionSet::Forward: return {Direction::Forward};
    case DirectionSet::Backward: return {Direction::Backward};
    case DirectionSet::Both: break;
    }
    return {Direction::Forward, Direction::Backward};
}

const std::vector<std::string>& sweepable_keys()
{
    static const std::vector<std::string> keys = {
        "kappa1", "kappa2", "g", "delta_p", "delta_he", "delta_e", "delta_c", "E_he",
        "E_eg", "b_in", "phi_p", "phi_he", "phi_eg", "J", "theta",
    };
    return keys;
}

SystemParams set_parameter(SystemParams p, std::string_view name, double v)
{
    if (name == "theta") {
        return with_coupling(p, raman_coupling(p), v);
    }
    if (name == "J") {
        return with_coupling(p, v, relative_phase(p));
    }
    const std::string key = canonical_key(name);
    if (key == "kappa1") {
        p.kappa1 = v;
        p.kappa2 = 2.0 * p.kappa - v;
    } else if (key == "kappa2") {
        p.kappa2 = v;
        p.kappa1 = 2.0 * p.kappa - v;
    } else if (key == "g") p.g = v;
    else if (key == "delta_p") p.delta_p = v;
    else if (key == "delta_he") p.delta_he = v;
    else if (key == "delta_e") p.delta_e = v;
    else if (key == "delta_c") p.delta_c = v;
    else if (key == "E_he") p.E_he = v;
    else if (key == "E_eg") p.E_eg = v;
    else if (key == "b_in") p.b_in = v;
    else if (key == "phi_p") p.phi_p = v;
    else if (key == "phi_he") p.phi_he = v;
    else if (key == "phi_eg") p.phi_eg = v;
    else throw ConfigError(std::string(name) + ": not a sweepable parameter");
    return p;
}

void SweepSpec::validate() const
{
    auto check = [](const SweepAxis& a, const char* label) {
        const std::string where = std::string(label) + " (" + a.name + ")";
        const auto& keys = sweepable_keys();
        if (std::find(keys.begin(), keys.end(), a.name) == keys.end()
            && std::find(keys.begin(), keys.end(), canonical_key(a.name)) == keys.end()) {
            throw ConfigError(where + ": unknown parameter; expected a numeric parameter field, J or theta");
        }
        if (a.n < 2) {
            throw ConfigError(where + ": need at least 2 points");
        }
        if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.min < a.max)) {
            throw ConfigError(where + ": need finite min < max");
        }
    };
    check(axis1, "axis1");
    if (axis2) {
        check(*axis2, "axis2");
        if (axis2->name == axis1.name) {
            throw ConfigError("axis2: must differ from axis1");
        }
    }
    if (optimal_J_theta) {
        for (const SweepAxis* a : {&axis1, axis2 ? &*axis2 : nullptr}) {
            if (a && (a->name == "J" || a->name == "theta" || a->name == "phi_he")) {
                throw ConfigError("optimal_J_theta: cannot be combined with a " + a->name + " axis");
            }
        }
    }
}

const Grid2D& SweepResult::grid(Direction d) const
{
    for (std::size_t i = 0; i < directions.size(); ++i) {
        if (directions[i] == d) {
            return grids[i];
        }
    }
    throw DomainError("sweep result has no " + std::string(to_string(d)) + " grid");
}

std::optional<double> observe(const SystemParams& p, Observable o)
{
    PhotonStats s;
    try {
        s = analytic_stats(p);
    } catch (const SingularDenominator&) {
        return std::nullopt;
    }
    switch (o) {
    case Observable::G2: return s.g2;
    case Observable::NPaper: return s.n_cavity_paper;
    case Observable::NFull: return s.n_cavity_full;
    case Observable::P1: return s.p1;
    case Observable::P2: return s.p2;
    }
    return std::nullopt;
}

std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string describe_spec(const SweepSpec& s)
{
    std::ostringstream os;
    auto axis = [&](const char* label, const SweepAxis& a) {
        os << label << '=' << a.name << ',' << format_double(a.min) << ',' << format_double(a.max) << ',' << a.n
           << '\n';
    };
    axis("axis1", s.axis1);
    if (s.axis2) {
        axis("axis2", *s.axis2);
    }
    os << "directions=" << to_string(s.directions) << '\n'
       << "observable=" << to_string(s.observable) << '\n'
       << "optimal_J_theta=" << (s.optimal_J_theta ? "true" : "false") << '\n';
    return os.str();
}

// Joint optimum of the point's parameters. The detuning does not enter the
// joint solve, so it is cleared from the cache key.
class OptimumCache {
public:
    std::optional<OptimalPoint> get(SystemParams p)
    {
        p.delta_c = 0.0;
        const std::string key = to_config_text(p);
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end()) {
                return it->second;
            }
        }
        std::optional<OptimalPoint> pt;
        try {
            pt = solve_optimal(p, false);
        } catch (const NumericalError&) {
        } catch (const DomainError&) {
        }
        std::lock_guard lock(mutex_);
        cache_.emplace(key, pt);
        return pt;
    }

private:
    std::mutex mutex_;
    std::map<std::string, std::optional<OptimalPoint>> cache_;
};

} // namespace

std::vector<std::pair<std::string, std::string>> provenance(const SweepResult& r)
{
    std::ostringstream hash;
    hash << std::hex << r.config_hash;
    return {
        {"observable", std::string(to_string(r.spec.observable))},
        {"optimal_J_theta", r.spec.optimal_J_theta ? "true" : "false"},
        {"config_hash", hash.str()},
        {"version", r.version},
    };
}

SweepResult run_sweep(const SweepSpec& spec, const SystemParams& base, unsigned jobs)
{
    spec.validate();
    SweepResult r;
    r.spec = spec;
    r.base = apply_settings(base, spec.overrides);
    r.directions = directions_of(spec.directions);
    r.config_hash = fnv1a(to_config_text(r.base) + describe_spec(spec));

    const Axis a1{spec.axis1.name, spec.axis1.min, spec.axis1.max, spec.axis1.n};
    const Axis a2 = spec.axis2 ? Axis{spec.axis2->name, spec.axis2->min, spec.axis2->max, spec.axis2->n}
                               : Axis{"", 0.0, 0.0, 1};
    r.grids.assign(r.directions.size(), Grid2D(a1, a2));

    OptimumCache cache;
    const std::size_t cells = a1.n * a2.n;
    parallel_for(cells * r.directions.size(), jobs, [&](std::size_t k) {
        const std::size_t d = k / cells;
        const std::size_t cell = k % cells;
        const std::size_t i = cell / a2.n;
        const std::size_t j = cell % a2.n;
        SystemParams p = set_parameter(r.base, a1.name, a1.value(i));
        if (spec.axis2) {
            p = set_parameter(p, a2.name, a2.value(j));
        }
        p.direction = r.directions[d];
        std::optional<double> v;
        try {
            validate(p);
            if (spec.optimal_J_theta) {
                if (const auto opt = cache.get(p)) {
                    p = with_coupling(p, opt->J, opt->theta);
                    v = observe(p, spec.observable);
                }
            } else {
                v = observe(p, spec.observable);
            }
        } catch (const DomainError&) {
            // Parameter combinations outside the model's domain are masked.
        }
        r.grids[d].at(i, j) = v;
    });
    return r;
}

void write_sweep_csv(std::ostream& os, const SweepResult& r, Direction d)
{
    auto header = provenance(r);
    header.insert(header.begin(), {"direction", std::string(to_string(d))});
    write_grid_csv(os, r.grid(d), header);
}

void write_sweep_1d_csv(std::ostream& os, const SweepResult& r)
{
    for (const auto& [k, v] : provenance(r)) {
        os << "# " << k << '=' << v << '\n';
    }
    const Grid2D& first = r.grids.front();
    os << first.axis1.name;
    for (Direction d : r.directions) {
        os << ',' << to_string(r.spec.observable) << '_' << to_string(d);
    }
    os << '\n';
    for (std::size_t i = 0; i < first.axis1.n; ++i) {
        os << format_double(first.axis1.value(i));
        for (const auto& g : r.grids) {
            os << ',';
            if (const auto& v = g.at(i, 0)) {
                os << format_double(*v);
            }
        }
        os << '\n';
    }
}

} // namespace pblockade
