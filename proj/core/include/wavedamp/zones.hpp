#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavedamp/profile.hpp"

namespace wavedamp {

enum class ZoneFamily { TwoZone, FourZoneNonEffective, EffectiveDecaying, FiveZoneOverdamping, UniformlyElliptic };

std::string to_string(ZoneFamily f);
ZoneFamily zone_family_from_string(const std::string& s);

enum class ZoneId { Zpd, Zell, Zred, Zred1, Zred2, Zhyp, Zdiss, Gap };

std::string to_string(ZoneId z);

enum class RegionId { PiHyp, PiEll, Boundary };

std::string to_string(RegionId r);

struct ZoneConstants {
    double N = 10.0;
    double N1 = 10.0;
    double N2 = 10.0;
    double eps = 0.1;
    double eps1 = 1.1;
    double eps2 = 0.9;
    double eps3 = 0.2;
    double t0 = -1.0;    // < 0 requests the automatic choice (EffectiveDecaying)
    double t_max = 50.0;
};

/// A scenario family's decomposition of the extended phase space, with its
/// separating curves and constants.  Queries are pure; the layout is immutable
/// after construction.
class ZoneLayout {
public:
    ZoneLayout(ZoneFamily family, ZoneConstants constants, Profile b, Profile g);

    ZoneFamily family() const { return family_; }
    const ZoneConstants& constants() const { return constants_; }
    const Profile& b() const { return b_; }
    const Profile& g() const { return g_; }
    double t_max() const { return constants_.t_max; }
    /// Start time of the decaying-g analysis (bg small enough); 0 elsewhere.
    double t0() const { return t0_; }

    /// Curve ids valid for this family (used by the CLI and separating_time).
    std::vector<std::string> curve_ids() const;

    /// Crossing time of the named separating curve at frequency xi, or
    /// nullopt when the curve is not crossed within [0, t_max].
    std::optional<double> separating_time(const std::string& curve, double xi) const;

    /// Literal evaluation of the zone membership inequalities.  When no
    /// zone's conditions hold the point is reported as Gap rather than
    /// guessed.
    ZoneId zone_of(double t, double xi) const;

    struct Segment {
        ZoneId zone;
        double t_begin;
        double t_end;
    };
    /// Partition of [0, t_max] at frequency xi into maximal zone segments
    /// (Gap segments included and flagged by their id).
    std::vector<Segment> zone_chain(double xi) const;

private:
    ZoneFamily family_;
    ZoneConstants constants_;
    Profile b_;
    Profile g_;
    double t0_ = 0.0;
};

/// Hyperbolic/elliptic region of the effective analysis:
/// PiHyp iff |xi| > (b + g xi^2)/2 beyond the relative tolerance.
RegionId region_of(const Profile& b, const Profile& g, double t, double xi,
                   double rel_tol = 1e-12);

/// Sub-zones of the dissipative zone used by the energy-multiplier method:
/// elliptic part |xi| <= (b/2) sqrt(1-eps^2), reduced part up to b/2.
bool in_diss_elliptic(const Profile& b, double eps, double t, double xi);
bool in_diss_reduced(const Profile& b, double eps, double t, double xi);

} // namespace wavedamp
