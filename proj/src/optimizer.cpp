#include "pblockade/optimizer.hpp"

#include "pblockade/errors.hpp"
#include "pblockade/parallel.hpp"
#include "pblockade/steady_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace pblockade {

namespace {

constexpr double pi = std::numbers::pi;

// Residual of the optimal-blockade condition in real coordinates
// x = (J, theta[, delta_c]). The complex c2g numerator is scaled by the
// squared drive so that its components are O(1).
class BlockadeResidual {
public:
    BlockadeResidual(const SystemParams& p, bool joint)
        : joint_(joint), G_(p.g * p.g / p.delta_p), delta_e_(p.delta_e), delta_c_(p.delta_c),
          omega_(input_drive(p)), e_eg_(p.E_eg)
    {
        const double s = std::max(omega_, e_eg_);
        scale_ = 1.0 / (s * s);
    }

    std::size_t size() const { return joint_ ? 3 : 2; }

    double delta_c(const std::array<double, 3>& x) const { return joint_ ? x[2] : delta_c_; }

    std::array<double, 3> value(const std::array<double, 3>& x) const
    {
        const cplx f = numerator(x) * scale_;
        std::array<double, 3> r{f.real(), f.imag(), 0.0};
        if (joint_) {
            r[2] = x[2] - G_ - x[0] * x[0] / delta_e_;
        }
        return r;
    }

    // Row-major Jacobian d r_k / d x_l.
    std::array<std::array<double, 3>, 3> jacobian(const std::array<double, 3>& x) const
    {
        const double J = x[0];
        const double theta = x[1];
        const cplx z = std::polar(J, -theta);
        const auto [M, N] = mn(x);
        const double om = omega_;
        const double E = e_eg_;
        const cplx dfdz = E * (E * z + om * delta_e_) + E * (E * z + om * N) + om * E * M;
        const cplx dJ = (dfdz * std::polar(1.0, -theta) + 2.0 * om * om * J) * scale_;
        const cplx dth = dfdz * cplx(0.0, -1.0) * z * scale_;
        const cplx ddc = (om * (E * z + om * delta_e_) + om * E * z) * scale_;

        std::array<std::array<double, 3>, 3> jac{};
        jac[0] = {dJ.real(), dth.real(), ddc.real()};
        jac[1] = {dJ.imag(), dth.imag(), ddc.imag()};
        if (joint_) {
            jac[2] = {-2.0 * J / delta_e_, 0.0, 1.0};
        }
        return jac;
    }

private:
    std::pair<cplx, cplx> mn(const std::array<double, 3>& x) const
    {
        const double dc = delta_c(x);
        return {cplx(dc - G_, -0.5), cplx(dc + delta_e_, -0.5)};
    }

    cplx numerator(const std::array<double, 3>& x) const
    {
        const double J = x[0];
        const cplx z = std::polar(J, -x[1]);
        const auto [M, N] = mn(x);
        const double om = omega_;
        const double E = e_eg_;
        return (E * z + om * N) * (E * z + om * delta_e_) + om * z * E * M + om * om * J * J;
    }

    bool joint_;
    double G_, delta_e_, delta_c_, omega_, e_eg_, scale_;
};

double norm_of(const std::array<double, 3>& r, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += r[i] * r[i];
    }
    return std::sqrt(s);
}

// Gaussian elimination with partial pivoting on the leading n x n block.
bool solve_linear(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b, std::size_t n,
                  std::array<double, 3>& x)
{
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) {
                piv = r;
            }
        }
        if (!(std::abs(a[piv][col]) > 1e-300)) {
            return false;
        }
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) {
            s -= a[i][c] * x[c];
        }
        x[i] = s / a[i][i];
    }
    return std::all_of(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n),
                       [](double v) { return std::isfinite(v); });
}

// Damped Newton with backtracking on |r|.
std::optional<std::array<double, 3>> newton(const BlockadeResidual& f, std::array<double, 3> x, int max_iterations)
{
    const std::size_t n = f.size();
    auto r = f.value(x);
    double nr = norm_of(r, n);
    for (int it = 0; it < max_iterations && nr > 1e-14; ++it) {
        std::array<double, 3> rhs{-r[0], -r[1], -r[2]};
        std::array<double, 3> dx{};
        if (!solve_linear(f.jacobian(x), rhs, n, dx)) {
            return std::nullopt;
        }
        double lambda = 1.0;
        bool accepted = false;
        while (lambda > 1e-8) {
            std::array<double, 3> trial = x;
            for (std::size_t i = 0; i < n; ++i) {
                trial[i] += lambda * dx[i];
            }
            const auto rt = f.value(trial);
            const double nt = norm_of(rt, n);
            if (std::isfinite(nt) && nt < (1.0 - 1e-4 * lambda) * nr) {
                x = trial;
                r = rt;
                nr = nt;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            break;
        }
        if (std::abs(x[0]) > 1e4) {
            return std::nullopt;
        }
    }
    if (!(nr < 1e-11)) {
        return std::nullopt;
    }
    return x;
}

std::optional<OptimalPoint> finish(const SystemParams& p, const BlockadeResidual& f, const std::array<double, 3>& x,
                                   bool joint)
{
    OptimalPoint pt;
    pt.J = x[0];
    pt.theta = wrap_phase(x[1]);
    pt.delta_c_opt = f.delta_c(x);
    pt.direction = p.direction;
    if (joint && std::abs(pt.delta_c_opt - resonant_detuning(p, pt.J)) > 1e-10) {
        return std::nullopt;
    }
    try {
        const auto s = analytic_amplitudes(derive_effective(apply_optimal(p, pt)));
        pt.residual = std::abs(s.c2g);
    } catch (const SingularDenominator&) {
        return std::nullopt;
    }
    if (!(pt.residual < 1e-10)) {
        return std::nullopt;
    }
    return pt;
}

void check_solvable(const SystemParams& p, bool joint)
{
    validate(p);
    if (p.delta_p == 0.0) {
        throw DivisionByZero("delta_p: must be nonzero for adiabatic elimination");
    }
    if (p.E_eg == 0.0) {
        throw NoRealSolution(
            "no real optimal point without the microwave drive: with E_eg = 0 the condition reduces to "
            "J^2 + (delta_c - i kappa/2 + delta_e) delta_e = 0, whose imaginary part -kappa delta_e/2 "
            "cannot vanish for real J (and delta_e = 0 makes the single-excitation denominator singular)");
    }
    if (input_drive(p) == 0.0) {
        throw NoRealSolution("no optimal point without a cavity drive (b_in = 0)");
    }
    if (joint && p.delta_e == 0.0) {
        throw DegenerateDetuning("delta_e = 0: the resonant detuning G + J^2/delta_e is undefined");
    }
}

bool same_root(const OptimalPoint& a, const OptimalPoint& b)
{
    return std::abs(a.J - b.J) <= 1e-8 * (1.0 + std::abs(a.J))
        && std::abs(wrap_phase(a.theta - b.theta)) <= 1e-8
        && std::abs(a.delta_c_opt - b.delta_c_opt) <= 1e-8 * (1.0 + std::abs(a.delta_c_opt));
}

bool root_order(const OptimalPoint& a, const OptimalPoint& b)
{
    const auto key = [](const OptimalPoint& r) {
        return std::array<double, 5>{std::abs(r.J), std::abs(r.theta), r.J, r.theta, r.delta_c_opt};
    };
    return key(a) < key(b);
}

std::optional<double> g2_at(SystemParams q, Direction dir)
{
    q.direction = dir;
    try {
        return analytic_stats(q).g2;
    } catch (const SingularDenominator&) {
        return std::nullopt;
    }
}

} // namespace

double resonant_detuning(const SystemParams& p, double J)
{
    if (p.delta_e == 0.0) {
        throw DegenerateDetuning("delta_e = 0: the resonant detuning G + J^2/delta_e is undefined");
    }
    return p.g * p.g / p.delta_p + J * J / p.delta_e;
}

SystemParams apply_optimal(const SystemParams& p, const OptimalPoint& pt)
{
    SystemParams q = with_coupling(p, pt.J, pt.theta);
    q.delta_c = pt.delta_c_opt;
    return q;
}

std::vector<OptimalPoint> find_optimal_roots(const SystemParams& p, bool fix_delta_c, const OptimizerOptions& opt)
{
    const bool joint = !fix_delta_c;
    check_solvable(p, joint);
    const BlockadeResidual f(p, joint);

    std::vector<OptimalPoint> found;
    for (double J0 : opt.J_starts) {
        for (double t0 : opt.theta_starts) {
            std::array<double, 3> x0{J0, t0, joint ? resonant_detuning(p, J0) : p.delta_c};
            if (const auto x = newton(f, x0, opt.max_iterations)) {
                if (auto pt = finish(p, f, *x, joint)) {
                    found.push_back(*pt);
                }
            }
        }
    }
    if (found.empty()) {
        throw NoRealSolution("optimal blockade: no multi-start Newton run converged");
    }
    // Sorting before de-duplication makes the representative of each root
    // independent of the start order.
    std::sort(found.begin(), found.end(), root_order);
    std::vector<OptimalPoint> roots;
    for (const auto& r : found) {
        if (std::none_of(roots.begin(), roots.end(), [&](const OptimalPoint& q) { return same_root(q, r); })) {
            roots.push_back(r);
        }
    }
    return roots;
}

OptimalPoint solve_optimal(const SystemParams& p, bool fix_delta_c, const OptimizerOptions& opt)
{
    const auto roots = find_optimal_roots(p, fix_delta_c, opt);
    const double jmin = std::abs(roots.front().J);
    const OptimalPoint* best = nullptr;
    for (const auto& r : roots) {
        if (std::abs(r.J) > jmin * (1.0 + 1e-9) + 1e-12) {
            continue;
        }
        if (!best || std::abs(r.theta) < std::abs(best->theta)) {
            best = &r;
        }
    }
    return *best;
}

std::optional<OptimalPoint> polish_optimal(const SystemParams& p, double J0, double theta0, int max_iterations)
{
    check_solvable(p, false);
    const BlockadeResidual f(p, false);
    if (const auto x = newton(f, {J0, theta0, p.delta_c}, max_iterations)) {
        return finish(p, f, *x, false);
    }
    return std::nullopt;
}

JThetaScan scan_j_theta(const SystemParams& p, double J_min, double J_max, double theta_min, double theta_max,
                        std::size_t resolution, unsigned jobs)
{
    if (resolution < 8) {
        throw DomainError("scan_j_theta: resolution must be >= 8 per axis");
    }
    if (!std::isfinite(J_min) || !std::isfinite(J_max) || !std::isfinite(theta_min) || !std::isfinite(theta_max)
        || !(J_min < J_max) || !(theta_min < theta_max)) {
        throw DomainError("scan_j_theta: ranges must be finite with min < max");
    }
    validate(p);
    JThetaScan scan;
    scan.forward = Grid2D(Axis{"J", J_min, J_max, resolution}, Axis{"theta", theta_min, theta_max, resolution});
    scan.backward = scan.forward;
    parallel_for(resolution * resolution, jobs, [&](std::size_t k) {
        const std::size_t i = k / resolution;
        const std::size_t j = k % resolution;
        const SystemParams q = with_coupling(p, scan.forward.axis1.value(i), scan.forward.axis2.value(j));
        scan.forward.at(i, j) = g2_at(q, Direction::Forward);
        scan.backward.at(i, j) = g2_at(q, Direction::Backward);
    });
    return scan;
}

NonreciprocityReport nonreciprocity(const SystemParams& p)
{
    NonreciprocityReport r;
    r.delta_c = p.delta_c;
    r.g2_forward = g2_at(p, Direction::Forward);
    r.g2_backward = g2_at(p, Direction::Backward);
    if (r.g2_forward && r.g2_backward && *r.g2_forward > 0.0 && *r.g2_backward > 0.0) {
        r.contrast = std::log10(*r.g2_backward / *r.g2_forward);
    }
    return r;
}

NonreciprocalPoint nonreciprocal_point(const SystemParams& p, double target_delta_c, const NonreciprocalOptions& opt)
{
    if (!std::isfinite(target_delta_c)) {
        throw DomainError("nonreciprocal_point: target detuning must be finite");
    }
    if (!(opt.J_abs_min >= 0.0) || !(opt.J_abs_max > opt.J_abs_min)) {
        throw DomainError("nonreciprocal_point: need 0 <= J_abs_min < J_abs_max");
    }
    SystemParams q = p;
    q.delta_c = target_delta_c;
    validate(q);

    const auto in_region = [&](double J) { return std::abs(J) >= opt.J_abs_min && std::abs(J) <= opt.J_abs_max; };

    auto scan = scan_j_theta(q, -opt.J_abs_max, opt.J_abs_max, -pi, pi, opt.resolution, opt.jobs);
    struct Cell {
        double g2;
        std::size_t i, j;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < scan.forward.axis1.n; ++i) {
        if (!in_region(scan.forward.axis1.value(i))) {
            continue;
        }
        for (std::size_t j = 0; j < scan.forward.axis2.n; ++j) {
            if (const auto& v = scan.forward.at(i, j)) {
                cells.push_back({*v, i, j});
            }
        }
    }
    if (cells.empty()) {
        throw NoRealSolution("nonreciprocal_point: no valid grid point in the allowed J range");
    }
    std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.g2 < b.g2; });

    NonreciprocalPoint out;
    out.J = scan.forward.axis1.value(cells.front().i);
    out.theta = scan.forward.axis2.value(cells.front().j);

    const std::size_t tries = std::min<std::size_t>(8, cells.size());
    bool have_root = false;
    if (q.E_eg > 0.0 && input_drive(q) > 0.0) {
        for (std::size_t k = 0; k < tries && !have_root; ++k) {
            const auto root = polish_optimal(q, scan.forward.axis1.value(cells[k].i),
                                             scan.forward.axis2.value(cells[k].j));
            if (root && in_region(root->J)) {
                out.J = root->J;
                out.theta = root->theta;
                have_root = true;
            }
        }
    }
    if (!have_root) {
        // No exact zero reachable: refine the grid minimum by successive local zooms.
        double span_j = scan.forward.axis1.step();
        double span_t = scan.forward.axis2.step();
        double best = cells.front().g2;
        for (int round = 0; round < 6; ++round) {
            const double j0 = out.J;
            const double t0 = out.theta;
            for (int a = -5; a <= 5; ++a) {
                for (int b = -5; b <= 5; ++b) {
                    const double J = j0 + span_j * a / 5.0;
                    const double t = wrap_phase(t0 + span_t * b / 5.0);
                    if (!in_region(J)) {
                        continue;
                    }
                    const auto v = g2_at(with_coupling(q, J, t), Direction::Forward);
                    if (v && *v < best) {
                        best = *v;
                        out.J = J;
                        out.theta = t;
                    }
                }
            }
            span_j *= 0.4;
            span_t *= 0.4;
        }
    }
    out.polished = have_root;
    out.report = nonreciprocity(with_coupling(q, out.J, out.theta));
    out.nonreciprocal = out.report.g2_backward && *out.report.g2_backward > 1.0;
    return out;
}

} // namespace pblockade
