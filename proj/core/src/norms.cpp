#include "wavedamp/norms.hpp"

#include <cmath>

#include "wavedamp/errors.hpp"

namespace wavedamp {

std::vector<double> DataProfile::r_grid() const {
    if (nodes < 2 || nodes % 2 != 0)
        throw ConfigError("data profile needs an even, >=2 number of quadrature intervals");
    if (!(r_min > 0.0 && r_max > r_min))
        throw ConfigError("data profile requires 0 < r_min < r_max");
    std::vector<double> r(static_cast<std::size_t>(nodes) + 1);
    const double l0 = std::log(r_min), l1 = std::log(r_max);
    for (int i = 0; i <= nodes; ++i)
        r[static_cast<std::size_t>(i)] = std::exp(l0 + (l1 - l0) * i / nodes);
    r.front() = r_min;
    r.back() = r_max;
    return r;
}

namespace {

double bump(const DataProfile& d, double r) {
    if (r < d.r_min || r > d.r_max) return 0.0;
    switch (d.shape) {
        case DataProfile::Shape::LogGaussian: {
            const double x = (std::log(r) - std::log(d.r0)) / d.sigma;
            return std::exp(-0.5 * x * x);
        }
        case DataProfile::Shape::Indicator:
            return 1.0;
    }
    return 0.0;
}

} // namespace

double DataProfile::u0_hat(double r) const { return u0_scale * bump(*this, r); }
double DataProfile::u1_hat(double r) const { return u1_scale * bump(*this, r); }

double unit_sphere_area(int n) {
    // omega_{n-1} = 2 pi^{n/2} / Gamma(n/2)
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double weighted_l2(std::span<const double> r, std::span<const double> values, int n,
                   NormWeight w) {
    if (r.size() != values.size()) throw ConfigError("weighted_l2: inconsistent grids");
    if (r.size() < 3 || r.size() % 2 == 0)
        throw ConfigError("weighted_l2: grid must have an even number of intervals");
    // Substituting r = e^x turns \int f(r) dr into \int f(e^x) e^x dx on a
    // uniform x grid; composite Simpson there.
    const std::size_t m = r.size();
    const double hx = (std::log(r.back()) - std::log(r.front())) / double(m - 1);
    auto integrand = [&](std::size_t i) {
        const double ri = r[i];
        const double weight = std::pow(ri, 2.0 * w.s) *
                              (w.bessel != 0.0 ? std::pow(1.0 + ri * ri, w.bessel) : 1.0);
        return weight * values[i] * values[i] * std::pow(ri, n - 1) * ri;
    };
    double sum = integrand(0) + integrand(m - 1);
    for (std::size_t i = 1; i + 1 < m; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i);
    const double integral = sum * hx / 3.0;
    return std::sqrt(unit_sphere_area(n) * std::max(integral, 0.0));
}

double data_norm(const DataProfile& data, int which, NormWeight w) {
    const auto r = data.r_grid();
    std::vector<double> vals(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        vals[i] = which == 0 ? data.u0_hat(r[i]) : data.u1_hat(r[i]);
    return weighted_l2(r, vals, data.dim, w);
}

double data_norm_intersection(const DataProfile& data, int which, NormWeight w1, NormWeight w2) {
    return std::max(data_norm(data, which, w1), data_norm(data, which, w2));
}

bool RatioStats::window_stable(double slack) const {
    if (sup_prev_window <= 0.0) return sup_last_window <= 0.0 || sup_prev_window == 0.0;
    return sup_last_window <= sup_prev_window * (1.0 + slack);
}

RatioStats ratio_series(std::span<const double> t, std::span<const double> norms,
                        std::span<const double> envelope) {
    if (t.size() != norms.size() || t.size() != envelope.size())
        throw ConfigError("ratio_series: inconsistent grids");
    RatioStats out;
    out.ratio.assign(t.size(), 0.0);
    const double t_end = t.empty() ? 0.0 : t.back();
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double env = envelope[i];
        if (!(env > 0.0) || !std::isfinite(env)) {
            ++out.excluded;
            continue;
        }
        const double r = norms[i] / env;
        out.ratio[i] = r;
        if (r > out.sup) {
            out.sup = r;
            out.sup_time = t[i];
        }
        if (t[i] >= 0.5 * t_end)
            out.sup_last_window = std::max(out.sup_last_window, r);
        else if (t[i] >= 0.25 * t_end)
            out.sup_prev_window = std::max(out.sup_prev_window, r);
    }
    // Least-squares slope of log(y) against log(t) over the tail half of the
    // samples (by index, so log grids keep a full decade in the fit).
    auto slope = [&](std::span<const double> ys) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (std::size_t i = t.size() / 2; i < t.size(); ++i) {
            if (t[i] <= 0.0) continue;
            const double y = ys[i];
            if (!(y > 0.0) || !std::isfinite(y)) continue;
            const double lx = std::log(t[i]), ly = std::log(y);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++cnt;
        }
        if (cnt < 2) return 0.0;
        const double denom = cnt * sxx - sx * sx;
        return denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
    };
    out.tail_slope = slope(norms);
    out.ratio_tail_slope = slope(out.ratio);
    return out;
}

} // namespace wavedamp
