#include "wavedamp/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavedamp/errors.hpp"
#include "wavedamp/quadrature.hpp"

namespace wavedamp {

std::string to_string(DampingKind k) {
    switch (k) {
        case DampingKind::Scattering: return "Scattering";
        case DampingKind::NonEffective: return "NonEffective";
        case DampingKind::Effective: return "Effective";
        case DampingKind::OverDamping: return "OverDamping";
        case DampingKind::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

DampingKind damping_kind_from_string(const std::string& s) {
    if (s == "Scattering") return DampingKind::Scattering;
    if (s == "NonEffective") return DampingKind::NonEffective;
    if (s == "Effective") return DampingKind::Effective;
    if (s == "OverDamping") return DampingKind::OverDamping;
    if (s == "Unclassified") return DampingKind::Unclassified;
    throw ConfigError("unknown damping kind '" + s + "'");
}

std::string to_string(VerdictState s) {
    switch (s) {
        case VerdictState::Pass: return "pass";
        case VerdictState::Fail: return "fail";
        case VerdictState::Undetermined: return "undetermined";
        case VerdictState::Boundary: return "boundary";
    }
    return "undetermined";
}

const Verdict* DampingClass::find(const std::string& condition) const {
    for (const auto& v : evidence)
        if (v.condition == condition) return &v;
    return nullptr;
}

std::vector<double> GridSpec::times() const {
    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(nodes) + 1);
    if (log_spacing) {
        const double lo = std::max(t_min, 1e-4 * t_max);
        for (int i = 0; i <= nodes; ++i)
            ts.push_back(lo * std::pow(t_max / lo, double(i) / nodes));
        if (t_min == 0.0) ts.front() = 0.0;
    } else {
        for (int i = 0; i <= nodes; ++i)
            ts.push_back(t_min + (t_max - t_min) * double(i) / nodes);
    }
    return ts;
}

std::string to_string(ConditionSet s) {
    switch (s) {
        case ConditionSet::A1A3: return "A1A3";
        case ConditionSet::Ap1Ap3: return "A'1A'3";
        case ConditionSet::NEF: return "NEF";
        case ConditionSet::Bp1Bp3: return "B'1B'3";
        case ConditionSet::B1B3: return "B1B3";
        case ConditionSet::EF: return "EF";
        case ConditionSet::G1G4: return "G1G4";
        case ConditionSet::E1E5: return "E1E5";
        case ConditionSet::OD1OD2: return "OD1OD2";
    }
    return "?";
}

ConditionSet condition_set_from_string(const std::string& s) {
    if (s == "A1A3") return ConditionSet::A1A3;
    if (s == "A'1A'3" || s == "Ap1Ap3") return ConditionSet::Ap1Ap3;
    if (s == "NEF" || s == "N-EF") return ConditionSet::NEF;
    if (s == "B'1B'3" || s == "Bp1Bp3") return ConditionSet::Bp1Bp3;
    if (s == "B1B3") return ConditionSet::B1B3;
    if (s == "EF") return ConditionSet::EF;
    if (s == "G1G4") return ConditionSet::G1G4;
    if (s == "E1E5") return ConditionSet::E1E5;
    if (s == "OD1OD2") return ConditionSet::OD1OD2;
    throw ConfigError("unknown condition set '" + s + "'");
}

bool ConditionReport::all_pass() const {
    for (const auto& v : verdicts)
        if (v.state == VerdictState::Fail || v.state == VerdictState::Undetermined) return false;
    return true;
}

const Verdict* ConditionReport::find(const std::string& condition) const {
    for (const auto& v : verdicts)
        if (v.condition == condition) return &v;
    return nullptr;
}

namespace {

constexpr double kTailRel = 1e-6;     // dyadic tail threshold for integral convergence
constexpr double kLimsupTol = 1e-3;   // boundary band around the limsup threshold 1

struct SupFit {
    double value = 0.0;
    double arg = 0.0;
    bool finite = true;
};

template <class F>
SupFit fit_sup(const std::vector<double>& ts, F&& f) {
    SupFit fit;
    fit.value = -std::numeric_limits<double>::infinity();
    for (double t : ts) {
        const double v = f(t);
        if (!std::isfinite(v)) {
            if (std::isnan(v)) continue; // outside the expression's domain
            fit.finite = false;
            fit.arg = t;
            fit.value = v;
            return fit;
        }
        if (v > fit.value) {
            fit.value = v;
            fit.arg = t;
        }
    }
    return fit;
}

/// Max of f over the tail half of the grid, plus how the per-dyadic-window
/// maxima trend over the last three windows.  "settled" tolerates a 5% band
/// (a bounded quantity creeping toward its limit); "growing" needs a clear
/// 20% increase per doubling, which guards against slowly oscillating
/// profiles being mistaken for growth.
struct TailTrend {
    double tail_max = 0.0;
    bool settled = false;
    bool growing = false;
};

template <class F>
TailTrend tail_trend(const std::vector<double>& ts, F&& f) {
    TailTrend out;
    const double t_end = ts.back();
    const double w2 = t_end / 2.0, w1 = t_end / 4.0, w0 = t_end / 8.0;
    double m0 = -1e300, m1 = -1e300, m2 = -1e300, tail = -1e300;
    for (double t : ts) {
        const double v = f(t);
        if (!std::isfinite(v)) continue;
        if (t >= t_end / 2.0) tail = std::max(tail, v);
        if (t >= w0 && t < w1) m0 = std::max(m0, v);
        else if (t >= w1 && t < w2) m1 = std::max(m1, v);
        else if (t >= w2) m2 = std::max(m2, v);
    }
    out.tail_max = tail;
    const double abs_slack = 1e-12;
    out.settled = m2 <= std::abs(m1) * 1.05 + abs_slack && m1 <= std::abs(m0) * 1.05 + abs_slack;
    out.growing = m1 >= m0 * 1.2 - abs_slack && m2 >= m1 * 1.2 - abs_slack && m2 > 0.0;
    return out;
}

Verdict make_verdict(std::string cond, VerdictState st, double witness, std::string note = {}) {
    Verdict v;
    v.condition = std::move(cond);
    v.state = st;
    v.witness = witness;
    v.note = std::move(note);
    return v;
}

/// b' does not change sign; isolated zeros allowed.
bool sign_constant(const Profile& p, const std::vector<double>& ts, int wanted_sign) {
    for (double t : ts) {
        const double d = p.d1(t);
        if (d == 0.0) continue;
        if (wanted_sign > 0 && d < 0.0) return false;
        if (wanted_sign < 0 && d > 0.0) return false;
    }
    return true;
}

const Profile& require(const Profile* p, const char* name) {
    if (!p) throw ConfigError(std::string("condition set requires profile ") + name);
    return *p;
}

} // namespace

DampingClass classify_friction(const Profile& b, double horizon, const GridSpec& grid) {
    DampingClass out;
    GridSpec g = grid;
    g.t_max = horizon;
    const std::vector<double> ts = g.times();

    if (b.is_zero()) {
        out.kind = DampingKind::Scattering;
        out.evidence.push_back(
            make_verdict("b-L1", VerdictState::Pass, 0.0, "zero coefficient, trivially integrable"));
        return out;
    }
    for (double t : ts) {
        if (b.value(t) <= 0.0) {
            out.kind = DampingKind::Unclassified;
            out.evidence.push_back(make_verdict("positivity", VerdictState::Fail, b.value(t),
                                                "b not positive on the sampled grid"));
            return out;
        }
    }

    // (i) scattering: \int_0^T b converges numerically.
    const TailResult ib = integrate_tail([&](double t) { return b.value(t); }, 0.0, horizon, kTailRel);
    out.evidence.push_back(make_verdict("b-L1", ib.converged ? VerdictState::Pass : VerdictState::Fail,
                                        ib.value));
    // (ii) over-damping: \int_0^T 1/b converges likewise.
    const TailResult iib =
        integrate_tail([&](double t) { return 1.0 / b.value(t); }, 0.0, horizon, kTailRel);
    out.evidence.push_back(make_verdict("inv-b-L1",
                                        iib.converged ? VerdictState::Pass : VerdictState::Fail,
                                        iib.value));

    if (ib.converged && iib.converged) {
        out.kind = DampingKind::Unclassified;
        out.evidence.push_back(make_verdict("exclusive", VerdictState::Fail, 0.0,
                                            "both tail tests converged; grid too coarse"));
        return out;
    }
    if (ib.converged) {
        out.kind = DampingKind::Scattering;
        return out;
    }
    if (iib.converged) {
        out.kind = DampingKind::OverDamping;
        return out;
    }

    // (iii) non-effective: limsup t b < 1 plus (B'1)-(B'3).
    const TailTrend tb = tail_trend(ts, [&](double t) { return t * b.value(t); });
    Verdict limsup = make_verdict("limsup-tb", VerdictState::Undetermined, tb.tail_max);
    if (std::abs(tb.tail_max - 1.0) <= kLimsupTol) {
        limsup.state = VerdictState::Boundary;
        limsup.note = "tail max within 1e-3 of the threshold 1";
    } else if (tb.settled && tb.tail_max < 1.0 - kLimsupTol) {
        limsup.state = VerdictState::Pass;
    } else if (tb.settled) {
        limsup.state = VerdictState::Fail;
    } else if (tb.growing) {
        limsup.state = VerdictState::Fail;
        limsup.note = "t b(t) growing on tail windows";
    } else {
        limsup.note = "tail maxima neither settled nor growing; grid too coarse";
    }
    out.evidence.push_back(limsup);

    if (limsup.state == VerdictState::Pass && tb.tail_max < 1.0) {
        const ConditionReport rep = check_conditions(ConditionSet::Bp1Bp3, &b, nullptr, horizon, grid);
        out.evidence.insert(out.evidence.end(), rep.verdicts.begin(), rep.verdicts.end());
        if (rep.all_pass()) {
            out.kind = DampingKind::NonEffective;
            return out;
        }
    }

    // (iv) effective: t b -> infinity (monotone growth on tail) plus (B1)-(B3).
    if (tb.growing) {
        const ConditionReport rep = check_conditions(ConditionSet::B1B3, &b, nullptr, horizon, grid);
        out.evidence.insert(out.evidence.end(), rep.verdicts.begin(), rep.verdicts.end());
        if (rep.all_pass()) {
            out.kind = DampingKind::Effective;
            return out;
        }
    }

    out.kind = DampingKind::Unclassified;
    return out;
}

ConditionReport check_conditions(ConditionSet set, const Profile* bp, const Profile* gp,
                                 double horizon, const GridSpec& grid) {
    ConditionReport rep;
    rep.set = set;
    GridSpec gs = grid;
    gs.t_max = horizon;
    const std::vector<double> ts = gs.times();

    auto push = [&rep](Verdict v) { rep.verdicts.push_back(std::move(v)); };

    switch (set) {
        case ConditionSet::A1A3: {
            const Profile& g = require(gp, "g");
            bool pos = true, incr = true;
            for (double t : ts) {
                pos = pos && g.value(t) > 0.0;
                incr = incr && g.d1(t) > 0.0;
            }
            push(make_verdict("A1", pos && incr ? VerdictState::Pass : VerdictState::Fail,
                              pos ? (incr ? 1.0 : -1.0) : 0.0,
                              pos ? (incr ? "" : "g' not positive") : "g not positive"));
            const TailResult inv =
                integrate_tail([&](double t) { return 1.0 / g.value(t); }, 0.0, horizon, kTailRel);
            push(make_verdict("A2", inv.converged ? VerdictState::Pass : VerdictState::Fail, inv.value));
            const SupFit c1 = fit_sup(ts, [&](double t) {
                const double G = big_g(g, t);
                if (G <= 0.0) return std::numeric_limits<double>::quiet_NaN();
                return std::abs(g.d1(t)) * G / (g.value(t) * g.value(t));
            });
            const SupFit c2 = fit_sup(ts, [&](double t) {
                const double G = big_g(g, t);
                if (G <= 0.0) return std::numeric_limits<double>::quiet_NaN();
                const double r = g.value(t) / G;
                return std::abs(g.d2(t)) / (g.value(t) * r * r);
            });
            rep.fitted["C1"] = c1.value;
            rep.fitted["C2"] = c2.value;
            push(make_verdict("A3", c1.finite && c2.finite ? VerdictState::Pass : VerdictState::Fail,
                              std::max(c1.value, c2.value)));
            break;
        }
        case ConditionSet::Ap1Ap3: {
            const Profile& b = require(bp, "b");
            const Profile& g = require(gp, "g");
            const bool decr = sign_constant(b, ts, -1);
            const TailResult ib =
                integrate_tail([&](double t) { return b.value(t); }, 0.0, horizon, kTailRel);
            push(make_verdict("A'1", decr && ib.converged ? VerdictState::Pass : VerdictState::Fail,
                              ib.value, decr ? "" : "b' changes sign or is positive"));
            const SupFit ctil = fit_sup(ts, [&](double t) {
                const double G = big_g(g, t);
                if (G <= 0.0) return std::numeric_limits<double>::quiet_NaN();
                return b.value(t) * G / g.value(t);
            });
            rep.fitted["Ctilde"] = ctil.value;
            push(make_verdict("A'2", ctil.finite ? VerdictState::Pass : VerdictState::Fail, ctil.value));
            const SupFit c = fit_sup(
                ts, [&](double t) { return std::abs(b.d1(t)) * (1.0 + t) / b.value(t); });
            rep.fitted["c"] = c.value;
            push(make_verdict("A'3", c.finite ? VerdictState::Pass : VerdictState::Fail, c.value));
            break;
        }
        case ConditionSet::NEF: {
            const Profile& b = require(bp, "b");
            const Profile& g = require(gp, "g");
            const SupFit ctil = fit_sup(ts, [&](double t) {
                const double G = big_g(g, t);
                if (G <= 0.0) return std::numeric_limits<double>::quiet_NaN();
                return b.value(t) * G / g.value(t);
            });
            rep.fitted["Ctilde"] = ctil.value;
            push(make_verdict("N-EF", ctil.finite ? VerdictState::Pass : VerdictState::Fail,
                              ctil.value));
            break;
        }
        case ConditionSet::Bp1Bp3: {
            const Profile& b = require(bp, "b");
            push(make_verdict("B'1", VerdictState::Pass, 0.0, "registered family is smooth"));
            const bool decr = sign_constant(b, ts, -1);
            push(make_verdict("B'2", decr ? VerdictState::Pass : VerdictState::Fail, 0.0));
            const SupFit fit = fit_sup(ts, [&](double t) {
                const double d = b.d1(t);
                if (d >= 0.0) return std::numeric_limits<double>::quiet_NaN();
                return b.value(t) * b.value(t) / (-d);
            });
            rep.fitted["B'3"] = fit.value;
            push(make_verdict("B'3", fit.finite ? VerdictState::Pass : VerdictState::Fail, fit.value));
            break;
        }
        case ConditionSet::B1B3: {
            const Profile& b = require(bp, "b");
            push(make_verdict("B1", VerdictState::Pass, 0.0, "registered family is smooth"));
            const bool sgn = sign_constant(b, ts, +1) || sign_constant(b, ts, -1);
            const TailTrend tb = tail_trend(ts, [&](double t) { return t * b.value(t); });
            push(make_verdict("B2", sgn && tb.growing ? VerdictState::Pass : VerdictState::Fail,
                              tb.tail_max, sgn ? "" : "b' changes sign"));
            const SupFit c1 =
                fit_sup(ts, [&](double t) { return std::abs(b.d1(t)) * (1.0 + t) / b.value(t); });
            const SupFit c2 = fit_sup(ts, [&](double t) {
                return std::abs(b.d2(t)) * (1.0 + t) * (1.0 + t) / b.value(t);
            });
            rep.fitted["C1"] = c1.value;
            rep.fitted["C2"] = c2.value;
            push(make_verdict("B3", c1.finite && c2.finite ? VerdictState::Pass : VerdictState::Fail,
                              std::max(c1.value, c2.value)));
            break;
        }
        case ConditionSet::EF: {
            const Profile& b = require(bp, "b");
            const SupFit a = fit_sup(
                ts, [&](double t) { return std::abs(b.d1(t)) / (b.value(t) * b.value(t)); });
            rep.fitted["a"] = a.value;
            VerdictState st = VerdictState::Fail;
            if (a.finite && a.value < 1.0 - kLimsupTol) st = VerdictState::Pass;
            else if (a.finite && std::abs(a.value - 1.0) <= kLimsupTol) st = VerdictState::Boundary;
            push(make_verdict("EF", st, a.value));
            break;
        }
        case ConditionSet::G1G4: {
            const Profile& b = require(bp, "b");
            const Profile& g = require(gp, "g");
            bool pos = true, decr = true;
            for (double t : ts) {
                pos = pos && g.value(t) > 0.0;
                decr = decr && g.d1(t) < 0.0;
            }
            push(make_verdict("G1", pos && decr ? VerdictState::Pass : VerdictState::Fail, 0.0));
            const TailResult ig =
                integrate_tail([&](double t) { return g.value(t); }, 0.0, horizon, kTailRel);
            push(make_verdict("G2", ig.converged ? VerdictState::Pass : VerdictState::Fail, ig.value));
            // g''/g' ~ g'/g: the ratio of ratios has to settle at 1.
            const TailTrend rr = tail_trend(ts, [&](double t) {
                const double d1 = g.d1(t);
                if (d1 == 0.0) return std::numeric_limits<double>::quiet_NaN();
                const double lhs = g.d2(t) / d1;
                const double rhs = d1 / g.value(t);
                if (rhs == 0.0) return std::numeric_limits<double>::quiet_NaN();
                return std::abs(lhs / rhs - 1.0);
            });
            rep.fitted["G3-deviation"] = rr.tail_max;
            Verdict g3 = make_verdict("G3", VerdictState::Undetermined, rr.tail_max);
            if (rr.tail_max < 0.05)
                g3.state = VerdictState::Pass;
            else if (!rr.settled)
                g3.note = "ratio not settling on the sampled horizon";
            else
                g3.state = VerdictState::Fail;
            push(g3);
            const SupFit a = fit_sup(ts, [&](double t) {
                const double d1 = g.d1(t);
                if (d1 >= 0.0) return std::numeric_limits<double>::infinity();
                return b.value(t) * g.value(t) / (-d1);
            });
            rep.fitted["a"] = a.value;
            VerdictState st = VerdictState::Fail;
            if (a.finite && a.value < 1.0 - kLimsupTol) st = VerdictState::Pass;
            else if (a.finite && std::abs(a.value - 1.0) <= kLimsupTol) st = VerdictState::Boundary;
            push(make_verdict("G4", st, a.value));
            break;
        }
        case ConditionSet::E1E5: {
            const Profile& b = require(bp, "b");
            const Profile& g = require(gp, "g");
            bool pos = true, decr = true;
            for (double t : ts) {
                pos = pos && g.value(t) > 0.0;
                decr = decr && g.d1(t) < 0.0;
            }
            push(make_verdict("E1", pos && decr ? VerdictState::Pass : VerdictState::Fail, 0.0));
            const TailResult ig =
                integrate_tail([&](double t) { return g.value(t); }, 0.0, horizon, kTailRel);
            push(make_verdict("E2", ig.converged ? VerdictState::Pass : VerdictState::Fail, ig.value));
            const SupFit bg = fit_sup(ts, [&](double t) { return b.value(t) * g.value(t); });
            rep.fitted["max-bg"] = bg.value;
            push(make_verdict("E3",
                              bg.value <= 0.5 * (1.0 + 1e-12) ? VerdictState::Pass : VerdictState::Fail,
                              bg.value));
            const SupFit e4 = fit_sup(
                ts, [&](double t) { return b.d1(t) / b.value(t) + g.d1(t) / g.value(t); });
            rep.fitted["max-E4"] = e4.value;
            push(make_verdict("E4", e4.value <= 1e-12 ? VerdictState::Pass : VerdictState::Fail,
                              e4.value));
            const TailResult e5 = integrate_tail(
                [&](double t) {
                    const double d = g.d1(t);
                    return d * d / g.value(t);
                },
                0.0, horizon, kTailRel);
            push(make_verdict("E5", e5.converged ? VerdictState::Pass : VerdictState::Fail, e5.value));
            break;
        }
        case ConditionSet::OD1OD2: {
            const Profile& b = require(bp, "b");
            const TailResult inv =
                integrate_tail([&](double t) { return 1.0 / b.value(t); }, 0.0, horizon, kTailRel);
            push(make_verdict("OD1", inv.converged ? VerdictState::Pass : VerdictState::Fail,
                              inv.value));
            const TailTrend od2 = tail_trend(ts, [&](double t) {
                return std::abs(b.d1(t)) / (b.value(t) * b.value(t));
            });
            rep.fitted["OD2-tail"] = od2.tail_max;
            Verdict v = make_verdict("OD2", VerdictState::Undetermined, od2.tail_max);
            if (od2.tail_max < 0.05 && od2.settled)
                v.state = VerdictState::Pass;
            else if (od2.growing)
                v.state = VerdictState::Fail;
            else
                v.note = "b'/b^2 not settled on the sampled horizon";
            push(v);
            break;
        }
    }
    return rep;
}

} // namespace wavedamp
