#include "wavedamp/zones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavedamp/errors.hpp"
#include "wavedamp/rootfind.hpp"

namespace wavedamp {

std::string to_string(ZoneFamily f) {
    switch (f) {
        case ZoneFamily::TwoZone: return "TwoZone";
        case ZoneFamily::FourZoneNonEffective: return "FourZoneNonEffective";
        case ZoneFamily::EffectiveDecaying: return "EffectiveDecaying";
        case ZoneFamily::FiveZoneOverdamping: return "FiveZoneOverdamping";
        case ZoneFamily::UniformlyElliptic: return "UniformlyElliptic";
    }
    return "?";
}

ZoneFamily zone_family_from_string(const std::string& s) {
    if (s == "TwoZone") return ZoneFamily::TwoZone;
    if (s == "FourZoneNonEffective") return ZoneFamily::FourZoneNonEffective;
    if (s == "EffectiveDecaying") return ZoneFamily::EffectiveDecaying;
    if (s == "FiveZoneOverdamping") return ZoneFamily::FiveZoneOverdamping;
    if (s == "UniformlyElliptic") return ZoneFamily::UniformlyElliptic;
    throw ConfigError("unknown zone family '" + s + "'");
}

std::string to_string(ZoneId z) {
    switch (z) {
        case ZoneId::Zpd: return "Zpd";
        case ZoneId::Zell: return "Zell";
        case ZoneId::Zred: return "Zred";
        case ZoneId::Zred1: return "Zred1";
        case ZoneId::Zred2: return "Zred2";
        case ZoneId::Zhyp: return "Zhyp";
        case ZoneId::Zdiss: return "Zdiss";
        case ZoneId::Gap: return "Gap";
    }
    return "?";
}

std::string to_string(RegionId r) {
    switch (r) {
        case RegionId::PiHyp: return "PiHyp";
        case RegionId::PiEll: return "PiEll";
        case RegionId::Boundary: return "Boundary";
    }
    return "?";
}

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

/// Branches of |xi| = c/(2g) (1 +/- sqrt(1 - (4/c^2) b g)); NaN when the
/// radicand is negative (the curve does not exist at this time).  The minus
/// branch is computed through the conjugate so it stays accurate (~ b/c)
/// when b g underflows the radicand.
double branch_curve(const Profile& b, const Profile& g, double c, double t, int sign) {
    const double x = 4.0 / (c * c) * b.value(t) * g.value(t);
    const double rad = 1.0 - x;
    if (rad < 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (sign > 0) return c / (2.0 * g.value(t)) * (1.0 + std::sqrt(rad));
    return c / (2.0 * g.value(t)) * x / (1.0 + std::sqrt(rad));
}

} // namespace

ZoneLayout::ZoneLayout(ZoneFamily family, ZoneConstants constants, Profile b, Profile g)
    : family_(family), constants_(constants), b_(std::move(b)), g_(std::move(g)) {
    const ZoneConstants& c = constants_;
    if (c.t_max <= 0.0) throw ConfigError("zone layout requires t_max > 0");
    switch (family_) {
        case ZoneFamily::TwoZone:
            if (c.N <= 0.0) throw ConfigError("TwoZone requires N > 0");
            break;
        case ZoneFamily::FourZoneNonEffective:
            if (c.N1 <= 0.0 || c.N2 <= 0.0) throw ConfigError("FourZone requires N1, N2 > 0");
            if (!(c.eps > 0.0 && c.eps < c.N2))
                throw ConfigError("FourZone requires 0 < eps < N2");
            break;
        case ZoneFamily::EffectiveDecaying: {
            if (!(c.eps > 0.0 && c.eps < 2.0 && c.N > c.eps))
                throw ConfigError("EffectiveDecaying requires 0 < eps < 2 and N > eps");
            // The decaying-g analysis assumes -g' <= 2 - eps throughout.
            const int kProbe = 512;
            for (int i = 0; i <= kProbe; ++i) {
                const double t = c.t_max * i / kProbe;
                if (-g_.d1(t) > 2.0 - 1e-9)
                    throw ConfigError("EffectiveDecaying requires -g'(t) <= 2 - eps on the horizon");
            }
            if (c.t0 >= 0.0) {
                t0_ = c.t0;
            } else {
                // First time with b g <= eps^2 / 8.
                const double target = c.eps * c.eps / 8.0;
                auto residual = [&](double t) { return b_.value(t) * g_.value(t) - target; };
                if (residual(0.0) <= 0.0) {
                    t0_ = 0.0;
                } else {
                    const auto hit = find_crossing_monotone(residual, 0.0, c.t_max);
                    if (!hit)
                        throw ConfigError(
                            "EffectiveDecaying: b g never drops below eps^2/8 on the horizon");
                    t0_ = *hit;
                }
            }
            break;
        }
        case ZoneFamily::FiveZoneOverdamping: {
            const double lo = 1.0 - kSqrtHalf, hi = 1.0 + kSqrtHalf;
            if (!(c.eps3 < lo && lo < c.eps2 && c.eps2 < c.eps1 && c.eps1 < hi && hi < c.N))
                throw ConfigError(
                    "FiveZoneOverdamping requires eps3 < 1-1/sqrt(2) < eps2 < eps1 < 1+1/sqrt(2) < N");
            break;
        }
        case ZoneFamily::UniformlyElliptic:
            break;
    }
}

std::vector<std::string> ZoneLayout::curve_ids() const {
    switch (family_) {
        case ZoneFamily::TwoZone: return {"G*xi^2=N"};
        case ZoneFamily::FourZoneNonEffective: return {"xi=N1*b", "g*xi=eps", "g*xi=N2"};
        case ZoneFamily::EffectiveDecaying: return {"t_ell", "t_red", "t_hyp", "f1", "f2"};
        case ZoneFamily::FiveZoneOverdamping:
            return {"g*xi=eps3", "g*xi=eps2", "g*xi=eps1", "g*xi=N", "f1", "f2"};
        case ZoneFamily::UniformlyElliptic: return {};
    }
    return {};
}

std::optional<double> ZoneLayout::separating_time(const std::string& curve, double xi) const {
    const ZoneConstants& c = constants_;
    auto solve = [&](const std::function<double(double)>& residual, double lo) {
        return find_crossing_monotone(residual, lo, c.t_max);
    };
    switch (family_) {
        case ZoneFamily::TwoZone:
            if (curve == "G*xi^2=N")
                return solve([&](double t) { return big_g(g_, t) * xi * xi - c.N; }, 0.0);
            break;
        case ZoneFamily::FourZoneNonEffective:
            if (curve == "xi=N1*b")
                return solve([&](double t) { return xi - c.N1 * b_.value(t); }, 0.0);
            if (curve == "g*xi=eps")
                return solve([&](double t) { return g_.value(t) * xi - c.eps; }, 0.0);
            if (curve == "g*xi=N2")
                return solve([&](double t) { return g_.value(t) * xi - c.N2; }, 0.0);
            break;
        case ZoneFamily::EffectiveDecaying:
            if (curve == "t_ell")
                return solve([&](double t) { return xi - branch_curve(b_, g_, c.N, t, +1); }, 0.0);
            if (curve == "t_red")
                return solve([&](double t) { return xi - branch_curve(b_, g_, c.eps, t, +1); }, t0_);
            if (curve == "t_hyp")
                return solve([&](double t) { return xi - branch_curve(b_, g_, c.eps, t, -1); }, t0_);
            if (curve == "f1")
                return solve([&](double t) { return xi - branch_curve(b_, g_, 2.0, t, +1); }, 0.0);
            if (curve == "f2")
                return solve([&](double t) { return xi - branch_curve(b_, g_, 2.0, t, -1); }, 0.0);
            break;
        case ZoneFamily::FiveZoneOverdamping: {
            auto level = [&](double lvl) {
                return solve([&](double t) { return g_.value(t) * xi - lvl; }, 0.0);
            };
            if (curve == "g*xi=eps3") return level(c.eps3);
            if (curve == "g*xi=eps2") return level(c.eps2);
            if (curve == "g*xi=eps1") return level(c.eps1);
            if (curve == "g*xi=N") return level(c.N);
            if (curve == "f1")
                return solve([&](double t) { return xi - branch_curve(b_, g_, 2.0, t, +1); }, 0.0);
            if (curve == "f2")
                return solve([&](double t) { return xi - branch_curve(b_, g_, 2.0, t, -1); }, 0.0);
            break;
        }
        case ZoneFamily::UniformlyElliptic:
            break;
    }
    throw ConfigError("curve '" + curve + "' is not defined for layout " + to_string(family_));
}

ZoneId ZoneLayout::zone_of(double t, double xi) const {
    const ZoneConstants& c = constants_;
    const double bv = b_.value(t), gv = g_.value(t);
    switch (family_) {
        case ZoneFamily::TwoZone: {
            return big_g(g_, t) * xi * xi <= c.N ? ZoneId::Zpd : ZoneId::Zell;
        }
        case ZoneFamily::FourZoneNonEffective: {
            const bool high = xi >= c.N1 * bv;
            const bool low = xi <= c.N1 * bv;
            if (low && gv * xi <= c.eps) return ZoneId::Zdiss;
            if (high && gv * xi <= c.eps) return ZoneId::Zhyp;
            if (high && gv * xi >= c.eps && gv * xi <= c.N2) return ZoneId::Zred;
            if (high && gv * xi >= c.N2) return ZoneId::Zell;
            return ZoneId::Gap;
        }
        case ZoneFamily::EffectiveDecaying: {
            const double gamma = 0.5 * bv + 0.5 * gv * xi * xi;
            const bool pi_ell = xi < gamma;
            const bool pi_hyp = xi > gamma;
            const double fm_eps = branch_curve(b_, g_, c.eps, t, -1);
            const double fp_eps = branch_curve(b_, g_, c.eps, t, +1);
            const double fp_N = branch_curve(b_, g_, c.N, t, +1);
            if (!std::isnan(fm_eps) && t >= t0_ && xi <= fm_eps && pi_ell) return ZoneId::Zdiss;
            if (!std::isnan(fm_eps) && t >= t0_ && xi >= fm_eps && xi <= fp_eps && pi_hyp)
                return ZoneId::Zhyp;
            if (!std::isnan(fp_eps) && !std::isnan(fp_N) && xi >= fp_eps && xi <= fp_N)
                return ZoneId::Zred;
            if (!std::isnan(fp_N) && xi >= fp_N && pi_ell) return ZoneId::Zell;
            return ZoneId::Gap;
        }
        case ZoneFamily::FiveZoneOverdamping: {
            const double f1 = branch_curve(b_, g_, 2.0, t, +1);
            const double f2 = branch_curve(b_, g_, 2.0, t, -1);
            const double gxi = gv * xi;
            if (gxi <= c.eps3 && !std::isnan(f2) && xi < f2) return ZoneId::Zdiss;
            if (gxi >= c.eps2 && gxi <= c.eps1 && !std::isnan(f1) && xi > f2 && xi < f1)
                return ZoneId::Zhyp;
            if (gxi >= c.eps3 && gxi <= c.eps2) return ZoneId::Zred2;
            if (gxi >= c.eps1 && gxi <= c.N) return ZoneId::Zred1;
            if (gxi >= c.N && !std::isnan(f1) && xi > f1) return ZoneId::Zell;
            return ZoneId::Gap;
        }
        case ZoneFamily::UniformlyElliptic:
            return ZoneId::Zell;
    }
    return ZoneId::Gap;
}

std::vector<ZoneLayout::Segment> ZoneLayout::zone_chain(double xi) const {
    // The minus-branch curves can dip right after their birth (two crossings
    // at one frequency), so transition times are located by scanning the
    // membership itself and bisecting each change to the time tolerance
    // rather than by inverting single curves.
    const int kScan = 2048;
    const double t_max = constants_.t_max;
    std::vector<Segment> chain;
    double seg_begin = 0.0;
    ZoneId prev = zone_of(0.0, xi);
    for (int i = 1; i <= kScan; ++i) {
        const double t = t_max * i / kScan;
        const ZoneId z = zone_of(t, xi);
        if (z == prev) continue;
        double lo = t_max * (i - 1) / kScan, hi = t;
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            if (zone_of(mid, xi) == prev)
                lo = mid;
            else
                hi = mid;
        }
        chain.push_back({prev, seg_begin, hi});
        seg_begin = hi;
        prev = z;
    }
    chain.push_back({prev, seg_begin, t_max});
    return chain;
}

RegionId region_of(const Profile& b, const Profile& g, double t, double xi, double rel_tol) {
    const double gamma = 0.5 * (b.value(t) + g.value(t) * xi * xi);
    const double scale = std::max({std::abs(xi), std::abs(gamma), 1e-300});
    if (xi > gamma + rel_tol * scale) return RegionId::PiHyp;
    if (xi < gamma - rel_tol * scale) return RegionId::PiEll;
    return RegionId::Boundary;
}

bool in_diss_elliptic(const Profile& b, double eps, double t, double xi) {
    return xi > 0.0 && xi <= 0.5 * b.value(t) * std::sqrt(1.0 - eps * eps);
}

bool in_diss_reduced(const Profile& b, double eps, double t, double xi) {
    const double bv = b.value(t);
    return xi >= 0.5 * bv * std::sqrt(1.0 - eps * eps) && xi <= 0.5 * bv;
}

} // namespace wavedamp
