#pragma once

#include <span>
#include <string>
#include <vector>

namespace wavedamp {

/// Radial frequency data for the initial pair (u0, u1): either a log-Gaussian
/// bump or an indicator band, compactly supported in [r_min, r_max] with
/// r_min > 0 so every homogeneous norm (negative orders included) is finite.
struct DataProfile {
    enum class Shape { LogGaussian, Indicator };
    Shape shape = Shape::LogGaussian;
    double r_min = 0.1;
    double r_max = 10.0;
    double r0 = 1.0;     // log-Gaussian centre
    double sigma = 0.5;  // log-Gaussian width (in log r)
    int dim = 3;         // spatial dimension n
    int nodes = 160;     // log-spaced quadrature intervals (must be even)
    double u0_scale = 1.0;
    double u1_scale = 1.0;

    std::vector<double> r_grid() const; // nodes+1 log-spaced points
    double u0_hat(double r) const;
    double u1_hat(double r) const;
};

/// Area of the unit sphere S^{n-1}.
double unit_sphere_area(int n);

/// Frequency weight r^{2s} (1+r^2)^{bessel}: homogeneous |D|^s for bessel=0,
/// Bessel-potential corrections via the second factor.
struct NormWeight {
    double s = 0.0;
    double bessel = 0.0;
};

/// ( omega_{n-1} \int w(r) |v(r)|^2 r^{n-1} dr )^{1/2} by composite Simpson on
/// the log-spaced grid.  The grid must have an even number of intervals.
double weighted_l2(std::span<const double> r, std::span<const double> values, int n,
                   NormWeight w);

/// Sobolev norm of a sampled radial field at fixed time.
inline double sobolev_norm(std::span<const double> r, std::span<const double> values, int n,
                           double beta) {
    return weighted_l2(r, values, n, NormWeight{beta, 0.0});
}

/// Norm of one data component; which = 0 for u0, 1 for u1.
double data_norm(const DataProfile& data, int which, NormWeight w);

/// Intersection norm: max of the two component seminorms.
double data_norm_intersection(const DataProfile& data, int which, NormWeight w1, NormWeight w2);

struct RatioStats {
    std::vector<double> ratio;  // observed / envelope, 0 where excluded
    double sup = 0.0;
    double sup_time = 0.0;
    double tail_slope = 0.0;    // LS slope of log(observed) vs log(t), tail half
    double ratio_tail_slope = 0.0;
    int excluded = 0;           // envelope zero/overflowed points
    /// sup over the last dyadic window vs the one before (stability probe)
    double sup_last_window = 0.0;
    double sup_prev_window = 0.0;
    bool window_stable(double slack = 0.05) const;
};

/// Pointwise ratio of a norm series against an envelope plus the tail trend
/// diagnostics used by the up-to-constant checks.
RatioStats ratio_series(std::span<const double> t, std::span<const double> norms,
                        std::span<const double> envelope);

} // namespace wavedamp
