#include "wavedamp/modes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavedamp/errors.hpp"
#include "wavedamp/quadrature.hpp"
#include "wavedamp/rootfind.hpp"

namespace wavedamp {

namespace detail {

namespace {

constexpr double kGamma = 2.0 - 1.41421356237309504880; // TR-BDF2 stage point

// Solve (I - c A) x = r with A = [[0,1],[-q,-p]] exactly.
inline void solve_stage(double c, double q, double p, double r1, double r2, double& x1,
                        double& x2) {
    const double det = 1.0 + c * p + c * c * q;
    x2 = (r2 - c * q * r1) / det;
    x1 = r1 + c * x2;
}

inline void apply_a(double q, double p, double y1, double y2, double& a1, double& a2) {
    a1 = y2;
    a2 = -q * y1 - p * y2;
}

struct StepWork {
    double t_stage = 0.0;  // TR stage time of column 0
    double y2_stage = 0.0; // TR stage velocity of column 0
};

// One TR-BDF2 step t -> t+h for ncol columns of Y.
void trbdf2_step(const LinearOde& sys, double t, double h, const std::array<double, 4>& y,
                 int ncol, std::array<double, 4>& out, StepWork* work) {
    const double tg = t + kGamma * h;
    const double t1 = t + h;
    const double q0 = sys.q(t), p0 = sys.p(t);
    const double qg = sys.q(tg), pg = sys.p(tg);
    const double q1 = sys.q(t1), p1 = sys.p(t1);

    const double c_tr = 0.5 * kGamma * h;
    const double c_bdf = (1.0 - kGamma) / (2.0 - kGamma) * h;
    const double a_g = 1.0 / (kGamma * (2.0 - kGamma));
    const double a_0 = (1.0 - kGamma) * (1.0 - kGamma) / (kGamma * (2.0 - kGamma));

    for (int c = 0; c < ncol; ++c) {
        const double y1 = y[2 * c], y2 = y[2 * c + 1];
        double f1, f2;
        apply_a(q0, p0, y1, y2, f1, f2);
        double yg1, yg2;
        solve_stage(c_tr, qg, pg, y1 + c_tr * f1, y2 + c_tr * f2, yg1, yg2);
        double z1, z2;
        solve_stage(c_bdf, q1, p1, a_g * yg1 - a_0 * y1, a_g * yg2 - a_0 * y2, z1, z2);
        out[2 * c] = z1;
        out[2 * c + 1] = z2;
        if (work && c == 0) {
            work->t_stage = tg;
            work->y2_stage = yg2;
        }
    }
}

inline double wnorm(const LinearOde& sys, const double* y) {
    return std::max(sys.weight1 * std::abs(y[0]), std::abs(y[1]));
}

// Interpolatory quadrature of f over [0,h] from samples at {0, a, h},
// exact for quadratics.
inline double quad3(double h, double a, double f0, double fa, double fh) {
    const double w1 = h * h * h / (6.0 * a * (h - a));
    const double w2 = h * (2.0 * h - 3.0 * a) / (6.0 * (h - a));
    const double w0 = h - w1 - w2;
    return w0 * f0 + w1 * fa + w2 * fh;
}

} // namespace

void integrate_linear(const LinearOde& sys, std::span<const double> t_grid,
                      std::array<double, 4>& y, int ncol, const SolverOptions& opts,
                      SolverStats& stats,
                      const std::function<void(std::size_t, const std::array<double, 4>&)>& on_sample) {
    if (t_grid.empty()) return;
    if (!(opts.rel_tol >= 1e-12 && opts.rel_tol <= 1e-3))
        throw ConfigError("solver rel_tol must lie in [1e-12, 1e-3]");

    double t = t_grid[0];
    on_sample(0, y);

    const double rtol = opts.rel_tol;
    const double atol = 1e-300;
    const double span = t_grid.back() - t_grid.front();
    double h = opts.h_init > 0.0 ? opts.h_init
                                 : std::min(span > 0.0 ? 1e-4 * span : 1e-4,
                                            1.0 / (1.0 + std::abs(sys.p(t)) +
                                                   std::sqrt(std::abs(sys.q(t)))));

    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        const double target = t_grid[k];
        while (t < target) {
            const double floor = opts.step_floor_scale * std::max(1.0, std::abs(t));
            if (t + 1.01 * floor >= target) {
                // Snap across sub-floor residual intervals.
                t = target;
                break;
            }
            h = std::min(h, target - t);
            if (opts.h_max > 0.0) h = std::min(h, opts.h_max);

            if (h < floor) {
                // Stiff limit: the second-order dynamics is slaved.  Switch to
                // the reduced first-order equation u' = -q u / p when valid.
                const double qv = sys.q(t), pv = sys.p(t);
                if (pv * pv >= 1e4 * std::abs(qv) && ncol == 1) {
                    const double decay =
                        integrate([&](double tau) { return sys.q(tau) / sys.p(tau); }, t, target,
                                  1e-12)
                            .value;
                    y[0] *= std::exp(-decay);
                    y[1] = -sys.q(target) * y[0] / sys.p(target);
                    ++stats.reduced_segments;
                    stats.hit_step_floor = true;
                    t = target;
                    break;
                }
                throw NumericalError("step size underflow at t=" + std::to_string(t) +
                                     " (h=" + std::to_string(h) + ", q=" + std::to_string(qv) +
                                     ", p=" + std::to_string(pv) + ")");
            }

            StepWork work_h1, work_h2;
            StepWork* w1 = opts.collect_energy_residual ? &work_h1 : nullptr;
            StepWork* w2 = opts.collect_energy_residual ? &work_h2 : nullptr;

            std::array<double, 4> y_big{}, y_mid{}, y_half{};
            trbdf2_step(sys, t, h, y, ncol, y_big, nullptr);
            trbdf2_step(sys, t, 0.5 * h, y, ncol, y_mid, w1);
            trbdf2_step(sys, t + 0.5 * h, 0.5 * h, y_mid, ncol, y_half, w2);

            double err = 0.0;
            for (int c = 0; c < ncol; ++c) {
                const double e[2] = {y_half[2 * c] - y_big[2 * c],
                                     y_half[2 * c + 1] - y_big[2 * c + 1]};
                const double sc =
                    atol + rtol * std::max(wnorm(sys, &y[2 * c]), wnorm(sys, &y_half[2 * c]));
                err = std::max(err, wnorm(sys, e) / (3.0 * sc));
            }

            if (err <= 1.0) {
                std::array<double, 4> y_new{};
                for (int i = 0; i < 2 * ncol; ++i)
                    y_new[i] = y_half[i] + (y_half[i] - y_big[i]) / 3.0;

                if (opts.collect_energy_residual && ncol == 1) {
                    // Discrete dissipation identity
                    //   E(t+h) - E(t) + \int p(tau) y2(tau)^2 dtau = O(local error)
                    // with the integral from the two half-steps' stage nodes.
                    const double q_here = sys.q(t);
                    auto energy = [&](const double* v) {
                        return 0.5 * (v[1] * v[1] + q_here * v[0] * v[0]);
                    };
                    auto f = [&](double tau, double y2) { return sys.p(tau) * y2 * y2; };
                    const double hh = 0.5 * h;
                    const double Q1 = quad3(hh, kGamma * hh, f(t, y[1]),
                                            f(work_h1.t_stage, work_h1.y2_stage),
                                            f(t + hh, y_mid[1]));
                    const double Q2 = quad3(hh, kGamma * hh, f(t + hh, y_mid[1]),
                                            f(work_h2.t_stage, work_h2.y2_stage),
                                            f(t + h, y_new[1]));
                    const double e0 = energy(y.data());
                    const double e1 = energy(y_new.data());
                    const double resid = std::abs(e1 - e0 + Q1 + Q2);
                    const double scale = std::max({e0, e1, 1e-300});
                    stats.energy_residual_max = std::max(stats.energy_residual_max, resid / scale);
                    if (e0 > 0.0)
                        stats.energy_increase_max =
                            std::max(stats.energy_increase_max, (e1 - e0) / e0);
                }

                y = y_new;
                t += h;
                ++stats.steps;
                stats.max_step = std::max(stats.max_step, h);
                stats.min_step = std::min(stats.min_step, h);
                const double grow = 0.9 * std::pow(std::max(err, 1e-10), -1.0 / 3.0);
                h *= std::clamp(grow, 0.2, 5.0);
            } else {
                ++stats.rejected;
                const double shrink = 0.9 * std::pow(err, -1.0 / 3.0);
                h *= std::clamp(shrink, 0.1, 0.5);
            }
        }
        on_sample(k, y);
    }
}

} // namespace detail

namespace {

detail::LinearOde mode_system(const Profile& b, const Profile& g, double xi) {
    detail::LinearOde sys;
    const double xi2 = xi * xi;
    sys.q = [xi2](double) { return xi2; };
    sys.p = [b, g, xi2](double t) { return b.value(t) + g.value(t) * xi2; };
    sys.weight1 = std::max(std::abs(xi), 1e-8);
    return sys;
}

} // namespace

ModeSolution solve_mode(const Profile& b, const Profile& g, double xi, double u0, double u1,
                        std::span<const double> t_grid, const SolverOptions& opts) {
    if (xi < 0.0) throw ConfigError("solve_mode requires xi >= 0");
    ModeSolution sol;
    sol.xi = xi;
    sol.u0 = u0;
    sol.u1 = u1;
    sol.t.assign(t_grid.begin(), t_grid.end());
    sol.u.resize(t_grid.size());
    sol.ut.resize(t_grid.size());
    sol.energy.resize(t_grid.size());

    const detail::LinearOde sys = mode_system(b, g, xi);
    std::array<double, 4> y{u0, u1, 0.0, 0.0};
    const double xi2 = xi * xi;
    detail::integrate_linear(sys, t_grid, y, 1, opts, sol.stats,
                             [&](std::size_t k, const std::array<double, 4>& v) {
                                 sol.u[k] = v[0];
                                 sol.ut[k] = v[1];
                                 sol.energy[k] = 0.5 * (v[1] * v[1] + xi2 * v[0] * v[0]);
                                 if (!std::isfinite(v[0]) || !std::isfinite(v[1]))
                                     throw NumericalError("non-finite mode sample at t=" +
                                                          std::to_string(sol.t[k]));
                             });
    return sol;
}

double FundamentalMatrix::det(std::size_t k) const {
    const auto& e = entries[k];
    return e[0] * e[3] - e[1] * e[2];
}

double FundamentalMatrix::det_condition(std::size_t k) const {
    const auto& e = entries[k];
    return std::abs(e[0] * e[3]) + std::abs(e[1] * e[2]);
}

FundamentalMatrix fundamental_matrix(const Profile& b, const Profile& g, double xi, double s,
                                     std::span<const double> t_grid, const SolverOptions& opts) {
    if (t_grid.empty() || t_grid[0] != s)
        throw ConfigError("fundamental_matrix requires t_grid starting at s");
    FundamentalMatrix fm;
    fm.xi = xi;
    fm.s = s;
    fm.t.assign(t_grid.begin(), t_grid.end());
    fm.entries.resize(t_grid.size());

    const detail::LinearOde sys = mode_system(b, g, xi);
    std::array<double, 4> y{1.0, 0.0, 0.0, 1.0}; // columns (1,0), (0,1)
    detail::integrate_linear(sys, t_grid, y, 2, opts, fm.stats,
                             [&](std::size_t k, const std::array<double, 4>& v) {
                                 // column-major state -> row-major entries
                                 fm.entries[k] = {v[0], v[2], v[1], v[3]};
                             });
    return fm;
}

namespace {

std::vector<double> uniform_grid(double a, double b, int n) {
    std::vector<double> ts(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) ts[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
    return ts;
}

struct BackTransformed {
    std::vector<double> t;
    std::vector<double> u;
    bool truncated = false;
};

} // namespace

TransformCheck check_transforms(const Profile& b, const Profile& g, double xi, double u0,
                                double u1, double horizon, const SolverOptions& opts) {
    TransformCheck out;
    const double xi2 = xi * xi;
    const int kNodes = 400;

    // Representability caps: the back-transform factors must stay below the
    // overflow guard on the compared window.
    auto cap_time = [&](const std::function<double(double)>& log_factor) {
        if (log_factor(horizon) <= kExpArgCap) return horizon;
        const auto hit = find_crossing_monotone(
            [&](double t) { return log_factor(t) - kExpArgCap; }, 0.0, horizon);
        return hit ? *hit : horizon;
    };
    const double cap_v = cap_time([&](double t) { return big_g(g, t) * xi2; });
    const double cap_w = cap_time([&](double t) { return log_lambda(b, g, t, xi); });
    out.horizon_v = cap_v;
    out.horizon_w = cap_w;
    out.truncated_v = cap_v < horizon;
    out.truncated_w = cap_w < horizon;

    // v-route: v'' + xi^2 (1 - bg/2 - g^2 xi^2/4 - g'/2) v + b v' = 0,
    // data v(0)=u0, v'(0) = (g(0)/2) xi^2 u0 + u1, back factor e^{-G xi^2}.
    {
        const auto grid = uniform_grid(0.0, cap_v, kNodes);
        ModeSolution direct = solve_mode(b, g, xi, u0, u1, grid, opts);

        detail::LinearOde sys;
        sys.q = [b, g, xi2](double t) {
            const double gv = g.value(t);
            return xi2 * (1.0 - 0.5 * b.value(t) * gv - 0.25 * gv * gv * xi2 - 0.5 * g.d1(t));
        };
        sys.p = [b](double t) { return b.value(t); };
        sys.weight1 = std::sqrt(std::max(std::abs(sys.q(0.0)), 1e-16));
        std::array<double, 4> y{u0, 0.5 * g.value(0.0) * xi2 * u0 + u1, 0.0, 0.0};
        SolverStats stats;
        double sup_diff = 0.0, sup_ref = 0.0;
        detail::integrate_linear(sys, grid, y, 1, opts, stats,
                                 [&](std::size_t k, const std::array<double, 4>& v) {
                                     const double back =
                                         std::exp(-big_g(g, grid[k]) * xi2) * v[0];
                                     sup_diff = std::max(sup_diff, std::abs(back - direct.u[k]));
                                     sup_ref = std::max(sup_ref, std::abs(direct.u[k]));
                                 });
        out.deviation_v = sup_ref > 0.0 ? sup_diff / sup_ref : sup_diff;
    }

    // w-route: w'' + [xi^2 (1 - bg/2 - g^2 xi^2/4 - g'/2) - b^2/4 - b'/2] w = 0,
    // data w(0)=u0, w'(0) = (b(0)/2 + g(0) xi^2/2) u0 + u1, back factor 1/lambda^2... e^{-log_lambda}.
    {
        const auto grid = uniform_grid(0.0, cap_w, kNodes);
        ModeSolution direct = solve_mode(b, g, xi, u0, u1, grid, opts);

        detail::LinearOde sys;
        sys.q = [b, g, xi2](double t) {
            const double gv = g.value(t);
            const double bv = b.value(t);
            return xi2 * (1.0 - 0.5 * bv * gv - 0.25 * gv * gv * xi2 - 0.5 * g.d1(t)) -
                   0.25 * bv * bv - 0.5 * b.d1(t);
        };
        sys.p = [](double) { return 0.0; };
        sys.weight1 = std::sqrt(std::max(std::abs(sys.q(0.0)), 1e-16));
        std::array<double, 4> y{
            u0, 0.5 * (b.value(0.0) + g.value(0.0) * xi2) * u0 + u1, 0.0, 0.0};
        SolverStats stats;
        double sup_diff = 0.0, sup_ref = 0.0;
        detail::integrate_linear(sys, grid, y, 1, opts, stats,
                                 [&](std::size_t k, const std::array<double, 4>& v) {
                                     const double back =
                                         std::exp(-log_lambda(b, g, grid[k], xi)) * v[0];
                                     sup_diff = std::max(sup_diff, std::abs(back - direct.u[k]));
                                     sup_ref = std::max(sup_ref, std::abs(direct.u[k]));
                                 });
        out.deviation_w = sup_ref > 0.0 ? sup_diff / sup_ref : sup_diff;
    }
    return out;
}

ModeLimit mode_limit(const ModeSolution& sol) {
    ModeLimit out;
    if (sol.t.size() < 4) return out;
    const double t_end = sol.t.back();
    double sum = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < sol.t.size(); ++k) {
        if (sol.t[k] >= 0.5 * t_end) {
            sum += sol.u[k];
            ++count;
        }
    }
    out.value = count > 0 ? sum / count : sol.u.back();
    const double u_end = std::abs(sol.u.back());
    const double ut_end = std::abs(sol.ut.back());
    out.ut_over_u = u_end > 0.0 ? ut_end / u_end : std::numeric_limits<double>::infinity();
    const double data_scale = std::max(std::abs(sol.u0), std::abs(sol.u1));
    const bool settled_nonzero = ut_end <= 1e-8 * u_end;
    const bool settled_zero = u_end <= 1e-12 * data_scale && ut_end <= 1e-12 * data_scale;
    out.converged = settled_nonzero || settled_zero;
    if (settled_zero) out.value = 0.0;
    return out;
}

} // namespace wavedamp
