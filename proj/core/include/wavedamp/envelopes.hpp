#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wavedamp/modes.hpp"
#include "wavedamp/norms.hpp"
#include "wavedamp/profile.hpp"
#include "wavedamp/zones.hpp"

namespace wavedamp {

/// Auxiliary symbols of the per-zone analysis.  Square roots are only taken
/// where the radicand is positive; callers get NaN outside the domain.
namespace sym {

/// d^2 = g^2 xi^4/4 - xi^2 (elliptic symbol, decaying-g analysis).
double d2(const Profile& g, double t, double xi);
double d(const Profile& g, double t, double xi);

/// m = (g' + b g) xi^2 / 2 (lower-order part next to d^2).
double m_noneff(const Profile& b, const Profile& g, double t, double xi);

/// <xi>_{b,g}^2 = | xi^2 - ((b + g xi^2)/2)^2 |, signed variant keeps the sign.
double jbg2_signed(const Profile& b, const Profile& g, double t, double xi);
double jbg(const Profile& b, const Profile& g, double t, double xi);

/// h^2 = g^2 xi^4/4 - 3 xi^2/4 and p^2 = 3 xi^2/4 - b^2/4 - g^2 xi^4/4
/// (over-damping five-zone layout, where b g = 1/2).
double h2(const Profile& g, double t, double xi);
double h(const Profile& g, double t, double xi);
double p2(const Profile& b, const Profile& g, double t, double xi);
double p(const Profile& b, const Profile& g, double t, double xi);

/// m = b^2/4 + b/2 - g xi^2/2 (over-damping elliptic lower-order part).
double m_od(const Profile& b, const Profile& g, double t, double xi);

/// Micro-energy weights gamma: g xi^2/2 and (b + g xi^2)/2.
double gamma_g(const Profile& g, double t, double xi);
double gamma_bg(const Profile& b, const Profile& g, double t, double xi);

} // namespace sym

// ---------------------------------------------------------------------------
// Theorem-level decay envelopes
// ---------------------------------------------------------------------------

enum class TheoremId { T21, T22, T31, T32, T41, T42, T51, T52, T53, T54 };

std::string to_string(TheoremId id);
TheoremId theorem_from_string(const std::string& s);

struct EnvelopeSpec {
    TheoremId id = TheoremId::T21;
    double beta = 2.0;
    double a = 0.5;        // structural constant of (G4)/(EF)
    double kappa = -1.0;   // < 0 -> default a/(2 sqrt(1-4/N2^2)) - a/2
    double n2 = 10.0;      // zone constant behind the default kappa
    double t0 = 0.0;       // reference time of the parabolic integrals
    int bprime_branch = 0; // +1 / -1; 0 decides from the profile
};

/// One term of a right-hand side: time_factor(t) * data norm.
struct EnvelopeTerm {
    enum class Factor { One, G, B, ExpHalfB, ParaPow };
    Factor factor = Factor::One;
    double exponent = 0.0;   // ParaPow: (1 + \int_{t0}^t 1/b)^{-exponent/2}
    int which = 0;           // 0 -> u0, 1 -> u1
    NormWeight w1;
    NormWeight w2;           // second seminorm of an intersection norm
    bool intersection = false;
};

struct TheoremEnvelope {
    EnvelopeSpec spec;
    double u_order = 0.0;  // |D| power of the measured u norm
    double ut_order = 0.0; // |D| power of the measured u_t norm
    std::vector<EnvelopeTerm> u;
    std::vector<EnvelopeTerm> ut;
};

TheoremEnvelope make_theorem_envelope(const EnvelopeSpec& spec, const Profile& b,
                                      const Profile& g);

/// Raw time factor of one term (data norms not included).
double term_time_factor(const EnvelopeTerm& term, const EnvelopeSpec& spec, const Profile& b,
                        const Profile& g, double t);

/// Full right-hand side: sum of term factors times the matching data norms.
double envelope_value(const std::vector<EnvelopeTerm>& terms, const EnvelopeSpec& spec,
                      const Profile& b, const Profile& g, const DataProfile& data, double t);

// ---------------------------------------------------------------------------
// Proposition-level per-mode bounds
// ---------------------------------------------------------------------------

/// Stable ids; `wavedamp check --list` enumerates them.
enum class BoundId {
    ScatteringEll, // elliptic V-system bound, increasing g
    ScatteringPd,  // pseudo-differential zone bound g(t)/g(s)
    NoneffHyp,     // hyperbolic bound exp(-(2-eps)/4 \int (b+g xi^2))
    NoneffDiss,    // dissipative bound delta(s)/delta(t)
    EffEllRefined, // refined elliptic bound exp(-xi^2 \int 1/(b+g xi^2))
    OdEllRefined,  // refined over-damping elliptic bound exp(-C_N \int b)
};

std::string to_string(BoundId id);
std::vector<std::string> bound_id_names();

/// Logs of the measured micro-energy fundamental-matrix entries and of the
/// proposition bound, entry by entry, at time index k of fm (solved from
/// s = fm.s).  Any exponential factor common to both sides is cancelled
/// analytically so the comparison stays representable in the stiff regimes.
struct BoundSample {
    std::array<double, 4> log_measured;
    std::array<double, 4> log_bound;
};

BoundSample bound_sample(BoundId id, const ZoneLayout& layout, const FundamentalMatrix& fm,
                         std::size_t k);

// ---------------------------------------------------------------------------
// Glued per-frequency envelopes
// ---------------------------------------------------------------------------

struct GluedEnvelope {
    double log_u = 0.0;  // envelope for xi^beta |u_hat(t)|
    double log_ut = 0.0; // envelope for xi^beta |u_hat_t(t)|
};

/// Composes the per-zone estimates along the zone chain of xi up to time t,
/// exactly as the per-case gluing in the analysis: each case multiplies the
/// previous zone's terminal estimate.  Gap segments fall back to the energy
/// bound, or to the elliptic form when the point sits in the elliptic region
/// and the elliptic symbol is defined.
GluedEnvelope glue_mode_envelope(const EnvelopeSpec& spec, const ZoneLayout& layout, double xi,
                                 double t, double u0_mag, double u1_mag);

// ---------------------------------------------------------------------------
// Pointwise lemma inequalities
// ---------------------------------------------------------------------------

struct InequalityResult {
    std::string id;
    int points = 0;
    double max_violation = 0.0; // max(LHS - RHS - fp_slack, 0) over the grid
    double max_raw_gap = 0.0;   // max(LHS - RHS, 0), no floating-point slack
};

std::vector<std::string> inequality_ids(ZoneFamily family);

/// Evaluates each named inequality on a deterministic grid of points inside
/// its zone; violations are measured beyond a floating-point slack of a few
/// ulps of the participating terms.
std::vector<InequalityResult> pointwise_inequality_suite(const ZoneLayout& layout,
                                                         std::span<const std::string> ids,
                                                         int points_per_inequality = 10000);

/// f(kappa) = 1/(16 (1-kappa)^2) + (1+kappa)^2/4, the five-zone hyperbolic
/// margin; f(0.1) < 3/4 makes p comparable to |xi|.
double five_zone_hyperbolic_margin(double kappa);

struct DeltaAsymptotics {
    bool monotone = false;   // t/delta(t,xi) non-decreasing on the tail grid
    double c_fit = 0.0;      // sup of (\int_0^t 1/delta) / (t/delta(t,xi))
    bool stable = false;     // c stable across the trailing dyadic windows
};

/// Under limsup t b < 1 the weight t/delta(t,xi) grows monotonically for
/// large times and controls \int_0^t dtau/delta up to a stable constant.
DeltaAsymptotics delta_asymptotics_check(const Profile& b, const Profile& g, double xi,
                                         double t_max, int nodes = 512);

// ---------------------------------------------------------------------------
// Symbol-class remainder integrability
// ---------------------------------------------------------------------------

struct IntegrabilityResult {
    double value = 0.0;
    bool converged = false;
    double t_begin = 0.0;
    double t_end = 0.0;
};

std::vector<std::string> integrability_ids();

/// "s2-remainder": \int_{t_xi}^\infty (g/G^2)/xi^2 (elliptic remainder scale,
/// increasing g; equals 2/N in closed form).
/// "s4-remainder": \int over the elliptic zone of (b'+g' xi^2)^2/(b+g xi^2)^3.
IntegrabilityResult symbol_integrability(const std::string& id, const ZoneLayout& layout,
                                         double xi, double N);

// ---------------------------------------------------------------------------
// Energy multipliers (dissipative zone of the effective analysis)
// ---------------------------------------------------------------------------

struct MultiplierFit {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
    int points = 0;
    bool pass = false; // properties 2..4 hold with the fitted constants
};

/// K = "xi2/b" over Zell(0,eps) or K = "b" over Zred(0,eps).  lambda1 is
/// fitted through the b-dominated chain K <= lambda1 b <= lambda1 b~, so it
/// reproduces the closed-form constants ((1-eps^2)/4 and 1).
MultiplierFit multiplier_check(const std::string& K, const Profile& b, const Profile& g,
                               double eps, double t_lo, double t_hi, int nt = 64, int nxi = 64);

struct MultiplierDecay {
    double C = 0.0;          // sup_s \int_s K E / E(s)
    double worst_ratio = 0.0;
    bool pass = false;
    bool applicable = false; // interval empty or K undefined -> not applicable
};

/// Checks E(t) <= E(t0)/(1-eps) exp(-(eps/C) \int_{t0}^t K) with eps = 1/2 on
/// the solution samples inside [t0, t1].
MultiplierDecay multiplier_decay_check(const ModeSolution& sol, const Profile& b,
                                       const Profile& g, const std::string& K, double t0,
                                       double t1);

} // namespace wavedamp
