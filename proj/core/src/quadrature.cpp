#include "wavedamp/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "wavedamp/errors.hpp"

namespace wavedamp {

namespace {

struct Panel {
    double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, const Panel& p, double tol, int depth,
             double& err_accum, long& evals) {
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m);
    const double rm = 0.5 * (m + p.b);
    const double flm = f(lm);
    const double frm = f(rm);
    evals += 2;
    const double left = simpson(p.a, m, p.fa, flm, p.fm);
    const double right = simpson(m, p.b, p.fm, frm, p.fb);
    const double delta = left + right - p.whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        err_accum += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return adapt(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1, err_accum, evals) +
           adapt(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1, err_accum, evals);
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_tol) {
    QuadResult res;
    if (a == b) return res;
    const double sign = (b >= a) ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);

    // A crude scale pass fixes the absolute tolerance for the recursion.
    const int kScaleSamples = 16;
    double scale = 0.0;
    for (int i = 0; i <= kScaleSamples; ++i) {
        const double t = lo + (hi - lo) * i / kScaleSamples;
        scale = std::max(scale, std::abs(f(t)));
    }
    res.evals += kScaleSamples + 1;
    double tol = rel_tol * scale * (hi - lo) + abs_tol;
    if (tol <= 0.0) tol = 1e-300;

    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    res.evals += 3;
    const Panel root{lo, hi, fa, fm, fb, simpson(lo, hi, fa, fm, fb)};
    res.value = sign * adapt(f, root, tol, 48, res.error, res.evals);
    return res;
}

TailResult integrate_tail(const std::function<double(double)>& f, double a, double horizon,
                          double rel_tail, double rel_tol) {
    TailResult res;
    if (horizon <= a) {
        res.converged = true;
        res.horizon_used = a;
        return res;
    }
    // Windows [a, w0], [w0, 2 w0], ... doubling up to the horizon.
    double w_end = std::min(horizon, a + std::max(1.0, std::abs(a)));
    double prev = a;
    double total = 0.0;
    std::vector<double> windows;
    while (true) {
        windows.push_back(integrate(f, prev, w_end, rel_tol).value);
        total += windows.back();
        prev = w_end;
        if (w_end >= horizon) break;
        w_end = std::min(horizon, 2.0 * w_end);
    }
    res.value = total;
    res.last_window = windows.back();
    res.horizon_used = horizon;
    // Fast path: the last window is already negligible.  Algebraic-decay
    // path: window contributions shrink geometrically across the last three
    // doublings, which certifies a convergent tail (W ~ 2^{-k alpha}) even
    // when the horizon truncation itself is not tiny, as for (1+t)^{-2}.
    res.converged = std::abs(res.last_window) <= rel_tail * std::max(std::abs(total), 1e-300);
    if (!res.converged && windows.size() >= 3) {
        const std::size_t n = windows.size();
        const double w0 = std::abs(windows[n - 3]);
        const double w1 = std::abs(windows[n - 2]);
        const double w2 = std::abs(windows[n - 1]);
        constexpr double kGeomCut = 0.97;
        if (w0 > 0.0 && w1 <= kGeomCut * w0 && w2 <= kGeomCut * w1) res.converged = true;
    }
    return res;
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f, double rel_tol,
                                       double checkpoint_spacing)
    : f_(std::move(f)), rel_tol_(rel_tol), spacing_(checkpoint_spacing) {
    ts_.push_back(0.0);
    vals_.push_back(0.0);
}

double CumulativeIntegral::operator()(double t) const {
    if (!f_) throw NumericalError("CumulativeIntegral: empty integrand");
    if (t == 0.0) return 0.0;
    std::lock_guard<std::mutex> lock(mutex_);
    // Nearest checkpoint at or below t (all checkpoints are >= 0; negative t
    // integrates down from zero without caching).
    if (t < 0.0) return -integrate(f_, t, 0.0, rel_tol_).value;
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    const std::size_t idx = static_cast<std::size_t>(it - ts_.begin()) - 1;
    double base_t = ts_[idx];
    double base_v = vals_[idx];
    if (idx + 1 == ts_.size()) {
        // Extend the checkpoint ladder toward t so later queries are cheap.
        while (t - base_t > spacing_) {
            const double next_t = base_t + spacing_;
            base_v += integrate(f_, base_t, next_t, rel_tol_).value;
            ts_.push_back(next_t);
            vals_.push_back(base_v);
            base_t = next_t;
        }
    }
    return base_v + integrate(f_, base_t, t, rel_tol_).value;
}

} // namespace wavedamp
