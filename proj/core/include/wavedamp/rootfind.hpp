#pragma once

#include <functional>
#include <optional>

namespace wavedamp {

/// Finds the crossing time of a monotone residual f on [t_lo, t_max] by
/// geometric bracket expansion followed by bisection to abs_tol.
///
/// Returns nullopt when f never changes sign on [t_lo, t_max] and the sampled
/// residual moves monotonically away from zero.  Throws BracketError when the
/// samples are non-monotone without a sign change (a layout/profile mismatch).
std::optional<double> find_crossing_monotone(const std::function<double(double)>& f,
                                             double t_lo, double t_max,
                                             double abs_tol = 1e-10);

} // namespace wavedamp
