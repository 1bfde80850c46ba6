#pragma once

#include <functional>
#include <mutex>
#include <vector>

namespace wavedamp {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // estimated absolute error
    long evals = 0;
};

/// Adaptive Simpson integration of f over [a, b].
/// Subdivides until the classical |S2-S1|/15 estimate meets
/// rel_tol * |integral| + abs_tol on every panel.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-10, double abs_tol = 0.0);

struct TailResult {
    double value = 0.0;       // integral over [a, horizon_used]
    bool converged = false;   // last dyadic window below rel_tail of the total
    double last_window = 0.0; // contribution of the final window
    double horizon_used = 0.0;
};

/// Integrates f over [a, horizon] in dyadic windows and reports whether the
/// tail has numerically converged: the last window [horizon/2, horizon]
/// contributes less than rel_tail of the accumulated total.
TailResult integrate_tail(const std::function<double(double)>& f, double a, double horizon,
                          double rel_tail = 1e-6, double rel_tol = 1e-10);

/// Cached cumulative integral t -> \int_0^t f.  Checkpoints are appended as
/// queries extend the covered range, so repeated evaluations at increasing
/// times cost only the increment.  Safe for concurrent use.
class CumulativeIntegral {
public:
    CumulativeIntegral() = default;
    CumulativeIntegral(std::function<double(double)> f, double rel_tol = 1e-10,
                       double checkpoint_spacing = 0.25);

    double operator()(double t) const;

private:
    std::function<double(double)> f_;
    double rel_tol_ = 1e-10;
    double spacing_ = 0.25;
    mutable std::mutex mutex_;
    mutable std::vector<double> ts_;   // checkpoint times, increasing, ts_[0] == 0
    mutable std::vector<double> vals_; // integral values at the checkpoints
};

} // namespace wavedamp
