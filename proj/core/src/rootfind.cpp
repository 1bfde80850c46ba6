#include "wavedamp/rootfind.hpp"

#include <cmath>
#include <vector>

#include "wavedamp/errors.hpp"

namespace wavedamp {

std::optional<double> find_crossing_monotone(const std::function<double(double)>& f,
                                             double t_lo, double t_max, double abs_tol) {
    if (!(t_max > t_lo)) return std::nullopt;

    const double f_lo = f(t_lo);
    if (f_lo == 0.0) return t_lo;

    // Expand geometrically from t_lo until the sign flips or t_max is hit.
    std::vector<double> ts{t_lo};
    std::vector<double> fs{f_lo};
    double step = std::max(1e-6, 1e-3 * (t_max - t_lo));
    double a = t_lo, fa = f_lo;
    double b = 0.0, fb = 0.0;
    bool bracketed = false;
    while (a < t_max) {
        b = std::min(a + step, t_max);
        fb = f(b);
        ts.push_back(b);
        fs.push_back(fb);
        if (fb == 0.0) return b;
        if (std::signbit(fa) != std::signbit(fb)) {
            bracketed = true;
            break;
        }
        a = b;
        fa = fb;
        step *= 2.0;
        if (b >= t_max) break;
    }

    if (!bracketed) {
        // No sign change: certify that |f| does not approach zero and then
        // back away, which would indicate a root the expansion stepped over.
        double min_abs = std::abs(fs.front());
        std::size_t min_idx = 0;
        for (std::size_t i = 1; i < fs.size(); ++i) {
            if (std::abs(fs[i]) < min_abs) {
                min_abs = std::abs(fs[i]);
                min_idx = i;
            }
        }
        if (min_idx + 1 < fs.size() &&
            std::abs(fs.back()) > 4.0 * (min_abs + 1e-300) && min_idx > 0) {
            throw BracketError("non-monotone residual without sign change",
                               ts[min_idx > 0 ? min_idx - 1 : 0],
                               ts[std::min(min_idx + 1, ts.size() - 1)]);
        }
        return std::nullopt;
    }

    // Bisection on [a, b].
    while (b - a > abs_tol) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if (std::signbit(fm) == std::signbit(fa)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

} // namespace wavedamp
