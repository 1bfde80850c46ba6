#pragma once

#include <map>
#include <memory>
#include <string>

namespace wavedamp {

/// Registered coefficient families.  All values, derivatives and (for most
/// families) primitives are closed-form; the double-exponential primitive
/// falls back to a cached cumulative quadrature.
enum class Family { Power, Exp, DoubleExp, Constant };

using Params = std::map<std::string, double>;

/// A named positive scalar function of time with analytic first and second
/// derivatives and a primitive \int_0^t value.  Immutable and cheap to copy.
class Profile {
public:
    Profile() = default;

    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;
    double primitive(double t) const;

    Family family() const;
    const std::string& family_name() const;
    const Params& params() const;
    /// True when the family/parameters guarantee value(t) > 0 for t >= 0.
    bool positive() const;
    bool is_zero() const;

    /// The all-zero coefficient (used for switched-off damping terms).
    static Profile zero();

private:
    friend Profile make_profile(const std::string&, const Params&);
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// Families: "power" {c, alpha}: c(1+t)^alpha; "exp" {c, alpha}: c e^{alpha t};
/// "doubleexp" {c, sign}: c e^{sign e^t}; "const" {c}.  Throws ConfigError for
/// unknown families or parameters out of the admissible range.
Profile make_profile(const std::string& family, const Params& params);

/// 1/p for the registered families (closed form again).
Profile reciprocal(const Profile& p);

/// G(t) = 1/2 \int_0^t g.
double big_g(const Profile& g, double t);

/// B(t) = \int_0^t b.
double big_b(const Profile& b, double t);

/// log delta(t,xi) = \int_0^t (b + g xi^2) = B(t) + 2 G(t) xi^2.
double log_delta(const Profile& b, const Profile& g, double t, double xi);

/// log lambda = 1/2 log delta.
double log_lambda(const Profile& b, const Profile& g, double t, double xi);

/// Exponentials of accumulated damping are only materialised below this
/// argument cap; everything above stays in log space.
inline constexpr double kExpArgCap = 700.0;

/// exp(x) for |x| <= kExpArgCap, +/-inf-safe saturation otherwise.
double guarded_exp(double x);

} // namespace wavedamp
