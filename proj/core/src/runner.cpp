#include "wavedamp/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavedamp/errors.hpp"
#include "wavedamp/parallel.hpp"
#include "wavedamp/quadrature.hpp"

namespace wavedamp {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool selected(const Scenario& sc, const std::string& id) {
    return std::find(sc.checks.begin(), sc.checks.end(), id) != sc.checks.end();
}

CheckResult make_check(std::string id, VerdictState st, std::string note = {}) {
    CheckResult c;
    c.id = std::move(id);
    c.verdict = st;
    c.note = std::move(note);
    return c;
}

bool check_ok(const CheckResult& c) {
    return c.verdict == VerdictState::Pass || c.verdict == VerdictState::Boundary;
}

/// Sup of ratio over the two trailing dyadic windows of [0, t_end];
/// "stable" means the last window does not exceed the previous one by more
/// than the slack (no blow-up trend).
struct WindowSup {
    double sup = 0.0;
    double last = 0.0;
    double prev = 0.0;
    void add(double t, double t_end, double value) {
        sup = std::max(sup, value);
        if (t >= 0.5 * t_end)
            last = std::max(last, value);
        else if (t >= 0.25 * t_end)
            prev = std::max(prev, value);
    }
    bool stable(double slack = 0.1) const {
        if (prev <= 0.0) return true;
        return last <= prev * (1.0 + slack);
    }
};

struct BoundCheckOutcome {
    double sup_ratio = 0.0;
    bool stable = true;
    int samples = 0;
};

/// Empirical constant sup |E_entry| / bound over an (s,t) grid inside a
/// zone's time window for one frequency.
BoundCheckOutcome run_bound_check(BoundId id, const ZoneLayout& layout, double xi, double w_lo,
                                  double w_hi, double rel_tol) {
    BoundCheckOutcome out;
    if (!(w_hi > w_lo)) return out;
    SolverOptions opts;
    opts.rel_tol = rel_tol;
    const int n_s = 4, n_t = 48;
    WindowSup win; // joint over the whole (s,t) grid, dyadic windows in t
    for (int i = 0; i < n_s; ++i) {
        const double s = w_lo + (w_hi - w_lo) * i / (2.0 * n_s);
        std::vector<double> ts;
        ts.reserve(n_t + 1);
        for (int k = 0; k <= n_t; ++k) ts.push_back(s + (w_hi - s) * k / n_t);
        const FundamentalMatrix fm = fundamental_matrix(layout.b(), layout.g(), xi, s, ts, opts);
        for (std::size_t k = 1; k < ts.size(); ++k) {
            const BoundSample bs = bound_sample(id, layout, fm, k);
            for (int e = 0; e < 4; ++e) {
                const double log_ratio = bs.log_measured[e] - bs.log_bound[e];
                const double ratio = guarded_exp(log_ratio);
                win.add(ts[k] - w_lo, w_hi - w_lo, ratio);
            }
            ++out.samples;
        }
    }
    out.sup_ratio = win.sup;
    out.stable = win.stable();
    return out;
}

/// Picks a frequency whose separating time sits well inside the horizon, so
/// both sides of the curve have room.
double pick_xi_for_curve(const ZoneLayout& layout, const std::string& curve, double target_t,
                         double xi_lo, double xi_hi) {
    double best = xi_hi;
    double best_gap = kInf;
    for (int i = 0; i <= 64; ++i) {
        const double xi = xi_lo * std::pow(xi_hi / xi_lo, i / 64.0);
        try {
            const auto t = layout.separating_time(curve, xi);
            if (!t) continue;
            const double gap = std::abs(*t - target_t);
            if (gap < best_gap) {
                best_gap = gap;
                best = xi;
            }
        } catch (const BracketError&) {
            continue;
        }
    }
    return best;
}

} // namespace

Report run_scenario(const Scenario& sc, const RunOptions& opts) {
    Report rep;
    rep.scenario = sc.echo;
    const Profile& b = sc.b;
    const Profile& g = sc.g;
    const double horizon = sc.effective_classify_horizon();
    const GridSpec cgrid;

    // ---- classification and condition sets -------------------------------
    const DampingClass cls = classify_friction(b, horizon, cgrid);
    {
        json evidence = json::array();
        for (const auto& v : cls.evidence) evidence.push_back(verdict_json(v));
        rep.classification["kind"] = to_string(cls.kind);
        rep.classification["evidence"] = evidence;
    }
    std::vector<ConditionReport> cond_reports;
    for (ConditionSet set : sc.condition_sets)
        cond_reports.push_back(check_conditions(set, &b, &g, horizon, cgrid));
    {
        json sets = json::array();
        for (const auto& r : cond_reports) sets.push_back(condition_report_json(r));
        rep.classification["condition_reports"] = sets;
    }

    bool hypothesis_ok = true;
    if (selected(sc, "classification")) {
        CheckResult c = make_check("classification", VerdictState::Pass);
        if (sc.expected_class && cls.kind != *sc.expected_class) {
            c.verdict = VerdictState::Fail;
            c.note = "hypothesis violation: classified as " + to_string(cls.kind) +
                     ", expected " + to_string(*sc.expected_class);
            hypothesis_ok = false;
        } else {
            c.note = to_string(cls.kind);
        }
        rep.checks.push_back(c);
    }
    if (selected(sc, "conditions")) {
        CheckResult c = make_check("conditions", VerdictState::Pass);
        int idx = 0;
        for (const auto& r : cond_reports) {
            if (!r.all_pass()) c.verdict = VerdictState::Fail;
            for (const auto& [k, v] : r.fitted)
                c.values[to_string(r.set) + "." + k] = v;
            ++idx;
        }
        if (cond_reports.empty()) c.note = "no condition sets selected";
        rep.checks.push_back(c);
    }

    // ---- zones ------------------------------------------------------------
    const ZoneLayout layout(sc.zone_family, sc.zone_constants, b, g);
    const std::vector<double> xi_grid = sc.data.r_grid();
    const std::vector<double> t_grid = sc.time_grid();

    std::vector<std::vector<ZoneLayout::Segment>> chains(xi_grid.size());
    double gap_time = 0.0, total_time = 0.0;
    for (std::size_t i = 0; i < xi_grid.size(); ++i) {
        chains[i] = layout.zone_chain(xi_grid[i]);
        for (const auto& seg : chains[i]) {
            total_time += seg.t_end - seg.t_begin;
            if (seg.zone == ZoneId::Gap) gap_time += seg.t_end - seg.t_begin;
        }
    }
    {
        rep.zones["family"] = to_string(sc.zone_family);
        rep.zones["t0"] = layout.t0();
        rep.zones["gap_fraction"] = total_time > 0.0 ? gap_time / total_time : 0.0;
        json sample = json::array();
        const std::size_t stride = std::max<std::size_t>(1, xi_grid.size() / 8);
        for (std::size_t i = 0; i < xi_grid.size(); i += stride) {
            json chain_json = json::array();
            for (const auto& seg : chains[i])
                chain_json.push_back({{"zone", to_string(seg.zone)},
                                      {"t_begin", seg.t_begin},
                                      {"t_end", seg.t_end}});
            sample.push_back({{"xi", xi_grid[i]}, {"chain", chain_json}});
        }
        rep.zones["chains"] = sample;
    }
    if (selected(sc, "zones")) {
        CheckResult c = make_check("zones", VerdictState::Pass);
        // chains cover [0, t_max] disjointly by construction; verify anyway
        for (std::size_t i = 0; i < xi_grid.size(); ++i) {
            double prev = 0.0;
            for (const auto& seg : chains[i]) {
                if (std::abs(seg.t_begin - prev) > 1e-9) c.verdict = VerdictState::Fail;
                prev = seg.t_end;
            }
            if (std::abs(prev - sc.t_max) > 1e-9) c.verdict = VerdictState::Fail;
        }
        c.values["gap_fraction"] = total_time > 0.0 ? gap_time / total_time : 0.0;
        rep.checks.push_back(c);
    }

    auto zone_at = [&](std::size_t xi_idx, double t) {
        for (const auto& seg : chains[xi_idx])
            if (t <= seg.t_end) return seg.zone;
        return chains[xi_idx].back().zone;
    };

    if (!hypothesis_ok) {
        rep.overall_pass = false;
        rep.failure_reason = "hypothesis violation";
        for (const auto& c : rep.checks)
            if (!check_ok(c)) rep.failure_reason = c.note.empty() ? rep.failure_reason : c.note;
        return rep;
    }

    // ---- mode sweep --------------------------------------------------------
    SolverOptions sweep_opts;
    sweep_opts.rel_tol = sc.rel_tol;
    sweep_opts.collect_energy_residual = true;
    std::vector<ModeSolution> modes(xi_grid.size());
    parallel_for(xi_grid.size(), opts.workers, [&](std::size_t i) {
        modes[i] = solve_mode(b, g, xi_grid[i], sc.data.u0_hat(xi_grid[i]),
                              sc.data.u1_hat(xi_grid[i]), t_grid, sweep_opts);
    });

    {
        std::int64_t steps = 0, rejected = 0;
        double max_resid = 0.0;
        int reduced = 0, floor_hits = 0;
        for (const auto& m : modes) {
            steps += m.stats.steps;
            rejected += m.stats.rejected;
            max_resid = std::max(max_resid, m.stats.energy_residual_max);
            reduced += m.stats.reduced_segments;
            floor_hits += m.stats.hit_step_floor ? 1 : 0;
        }
        rep.sweep["modes"] = xi_grid.size();
        rep.sweep["steps"] = steps;
        rep.sweep["rejected"] = rejected;
        rep.sweep["max_energy_residual"] = max_resid;
        rep.sweep["reduced_segments"] = reduced;
        rep.sweep["step_floor_hits"] = floor_hits;
    }

    if (selected(sc, "energy")) {
        CheckResult c = make_check("energy", VerdictState::Pass);
        // monotonicity per solver step, plus a coarse guard on the output grid
        double per_step = 0.0, per_sample = 0.0;
        for (const auto& m : modes) {
            per_step = std::max(per_step, m.stats.energy_increase_max);
            for (std::size_t k = 1; k < m.energy.size(); ++k) {
                const double prev = m.energy[k - 1];
                if (prev <= 0.0) continue;
                per_sample = std::max(per_sample, (m.energy[k] - prev) / prev);
            }
        }
        c.values["max_step_increase"] = per_step;
        c.values["max_sample_increase"] = per_sample;
        if (per_step > 10.0 * sc.rel_tol || per_sample > 1e4 * sc.rel_tol)
            c.verdict = VerdictState::Fail;
        rep.checks.push_back(c);
    }
    if (selected(sc, "dissipation")) {
        CheckResult c = make_check("dissipation", VerdictState::Pass);
        double worst = 0.0;
        for (const auto& m : modes) worst = std::max(worst, m.stats.energy_residual_max);
        c.values["max_step_residual"] = worst;
        if (worst > 10.0 * sc.rel_tol) c.verdict = VerdictState::Fail;
        rep.checks.push_back(c);
    }

    // ---- norm and envelope series ------------------------------------------
    const TheoremEnvelope env = make_theorem_envelope(sc.theorem, b, g);
    std::vector<double> norm_u(t_grid.size()), norm_ut(t_grid.size());
    std::vector<double> env_u(t_grid.size()), env_ut(t_grid.size());
    {
        std::vector<double> field(xi_grid.size());
        for (std::size_t k = 0; k < t_grid.size(); ++k) {
            for (std::size_t i = 0; i < xi_grid.size(); ++i) field[i] = modes[i].u[k];
            norm_u[k] = sobolev_norm(xi_grid, field, sc.data.dim, env.u_order);
            for (std::size_t i = 0; i < xi_grid.size(); ++i) field[i] = modes[i].ut[k];
            norm_ut[k] = sobolev_norm(xi_grid, field, sc.data.dim, env.ut_order);
            env_u[k] = envelope_value(env.u, sc.theorem, b, g, sc.data, t_grid[k]);
            env_ut[k] = envelope_value(env.ut, sc.theorem, b, g, sc.data, t_grid[k]);
        }
    }
    const RatioStats ratio_u = ratio_series(t_grid, norm_u, env_u);
    const RatioStats ratio_ut = ratio_series(t_grid, norm_ut, env_ut);

    if (selected(sc, "envelope")) {
        CheckResult c = make_check("envelope", VerdictState::Pass);
        c.values["sup_ratio_u"] = ratio_u.sup;
        c.values["sup_ratio_ut"] = ratio_ut.sup;
        c.values["tail_slope_u"] = ratio_u.tail_slope;
        c.values["tail_slope_ut"] = ratio_ut.tail_slope;
        c.values["ratio_tail_slope_u"] = ratio_u.ratio_tail_slope;
        c.values["excluded_u"] = ratio_u.excluded;
        if (!(ratio_u.sup > 0.0) || !std::isfinite(ratio_u.sup) || !std::isfinite(ratio_ut.sup))
            c.verdict = VerdictState::Fail;
        if (!ratio_u.window_stable(0.1) || !ratio_ut.window_stable(0.1))
            c.verdict = VerdictState::Fail;
        rep.checks.push_back(c);
    }

    // ---- transform consistency ---------------------------------------------
    if (selected(sc, "transforms")) {
        CheckResult c = make_check("transforms", VerdictState::Pass);
        const double draws[3] = {sc.data.r0, 2.0 * sc.data.r_min,
                                 std::min(4.0, sc.data.r_max)};
        SolverOptions topts;
        topts.rel_tol = std::min(sc.rel_tol, 1e-10);
        double worst = 0.0;
        for (double xi : draws) {
            const TransformCheck tc =
                check_transforms(b, g, xi, 1.0, 0.0, std::min(sc.t_max, 5.0), topts);
            worst = std::max({worst, tc.deviation_v, tc.deviation_w});
        }
        c.values["max_deviation"] = worst;
        if (worst > sc.check_tol) c.verdict = VerdictState::Fail;
        rep.checks.push_back(c);
    }

    // ---- Liouville identity --------------------------------------------------
    if (selected(sc, "liouville")) {
        CheckResult c = make_check("liouville", VerdictState::Pass);
        SolverOptions lopts;
        lopts.rel_tol = 1e-12;
        const double T = std::min(sc.t_max, 5.0);
        std::vector<double> ts;
        for (int k = 0; k <= 100; ++k) ts.push_back(T * k / 100.0);
        double worst = 0.0;
        int asserted = 0, skipped = 0;
        for (double xi : {0.5, 1.0, 2.0}) {
            const FundamentalMatrix fm = fundamental_matrix(b, g, xi, 0.0, ts, lopts);
            for (std::size_t k = 1; k < ts.size(); ++k) {
                const double log_true = -log_delta(b, g, ts[k], xi);
                if (log_true < -600.0) {
                    ++skipped;
                    continue;
                }
                const double det_true = std::exp(log_true);
                // only assert where the subtraction is well conditioned
                if (fm.det_condition(k) > 3.0e4 * det_true) {
                    ++skipped;
                    continue;
                }
                worst = std::max(worst, std::abs(fm.det(k) - det_true) / det_true);
                ++asserted;
            }
        }
        c.values["max_rel_error"] = worst;
        c.values["asserted_points"] = asserted;
        c.values["skipped_points"] = skipped;
        if (asserted < 3 || worst > sc.check_tol) c.verdict = VerdictState::Fail;
        rep.checks.push_back(c);
    }

    // ---- proposition bounds ---------------------------------------------------
    if (selected(sc, "prop_bounds")) {
        CheckResult c = make_check("prop_bounds", VerdictState::Pass);
        auto run = [&](BoundId id, double xi, double lo, double hi) {
            if (!(hi > lo)) {
                c.verdict = VerdictState::Undetermined;
                c.note = "empty zone window for " + to_string(id);
                return;
            }
            const BoundCheckOutcome o =
                run_bound_check(id, layout, xi, lo, hi, std::min(sc.rel_tol, 1e-10));
            c.values[to_string(id) + ".C"] = o.sup_ratio;
            c.values[to_string(id) + ".samples"] = o.samples;
            if (!(o.sup_ratio > 0.0) || !std::isfinite(o.sup_ratio) || !o.stable)
                c.verdict = VerdictState::Fail;
        };
        switch (sc.zone_family) {
            case ZoneFamily::TwoZone: {
                const double xi =
                    pick_xi_for_curve(layout, "G*xi^2=N", 0.4 * sc.t_max, 0.05, 50.0);
                const auto t_xi = layout.separating_time("G*xi^2=N", xi);
                if (t_xi) {
                    run(BoundId::ScatteringPd, xi, 0.0, *t_xi);
                    run(BoundId::ScatteringEll, xi, *t_xi, sc.t_max);
                }
                break;
            }
            case ZoneFamily::FourZoneNonEffective: {
                // dissipative and hyperbolic windows of a small frequency
                const double xi = pick_xi_for_curve(layout, "xi=N1*b", 0.3 * sc.t_max,
                                                    0.01, 10.0);
                const auto t1 = layout.separating_time("xi=N1*b", xi);
                const auto t2 = layout.separating_time("g*xi=eps", xi);
                const double diss_lo = t2 ? *t2 : 0.0; // eps-curve may lie before t = 0
                if (t1) {
                    run(BoundId::NoneffDiss, xi, diss_lo, *t1);
                    run(BoundId::NoneffHyp, xi, *t1, sc.t_max);
                }
                break;
            }
            case ZoneFamily::EffectiveDecaying: {
                const double xi =
                    pick_xi_for_curve(layout, "t_ell", std::min(5.0, 0.25 * sc.t_max), 1.0,
                                      1e7);
                const auto t_ell = layout.separating_time("t_ell", xi);
                run(BoundId::EffEllRefined, xi, 0.0, t_ell ? *t_ell : sc.t_max);
                break;
            }
            case ZoneFamily::FiveZoneOverdamping: {
                const double xi =
                    pick_xi_for_curve(layout, "g*xi=N", std::min(3.0, 0.5 * sc.t_max), 1.0,
                                      1e7);
                const auto t4 = layout.separating_time("g*xi=N", xi);
                run(BoundId::OdEllRefined, xi, 0.0, t4 ? *t4 : sc.t_max);
                break;
            }
            case ZoneFamily::UniformlyElliptic:
                run(BoundId::OdEllRefined, sc.data.r0, 0.0, sc.t_max);
                break;
        }
        rep.checks.push_back(c);
    }

    // ---- pointwise inequalities -----------------------------------------------
    if (selected(sc, "inequalities")) {
        CheckResult c = make_check("inequalities", VerdictState::Pass);
        const auto ids = inequality_ids(sc.zone_family);
        if (ids.empty()) {
            c.verdict = VerdictState::Pass;
            c.note = "no zone inequalities for this family";
        } else {
            const auto results = pointwise_inequality_suite(layout, ids, 10000);
            for (const auto& r : results) {
                c.values[r.id + ".max_violation"] = r.max_violation;
                c.values[r.id + ".points"] = r.points;
                if (r.max_violation > 0.0) c.verdict = VerdictState::Fail;
            }
        }
        if (sc.zone_family == ZoneFamily::FourZoneNonEffective &&
            cls.kind == DampingKind::NonEffective) {
            // delta-weight asymptotics, valid under limsup t b < 1
            const DeltaAsymptotics da =
                delta_asymptotics_check(b, g, sc.data.r0, sc.t_max);
            c.values["delta_asympt.c"] = da.c_fit;
            c.values["delta_asympt.monotone"] = da.monotone ? 1.0 : 0.0;
            if (!da.monotone || !da.stable) c.verdict = VerdictState::Fail;
        }
        rep.checks.push_back(c);
    }

    // ---- symbol integrability ---------------------------------------------------
    if (selected(sc, "integrability")) {
        CheckResult c = make_check("integrability", VerdictState::Pass);
        if (sc.zone_family == ZoneFamily::TwoZone) {
            for (double N : {1.0, 2.0, 4.0}) {
                const auto r = symbol_integrability("s2-remainder", layout, 1.0, N);
                c.values["s2.N" + std::to_string(int(N))] = r.value;
                if (!r.converged) c.verdict = VerdictState::Fail;
            }
        } else if (sc.zone_family == ZoneFamily::EffectiveDecaying) {
            const double xi = pick_xi_for_curve(layout, "t_ell",
                                                std::min(5.0, 0.25 * sc.t_max), 1.0, 1e7);
            double prev = kInf;
            for (double N : {sc.zone_constants.N, 2.0 * sc.zone_constants.N,
                             4.0 * sc.zone_constants.N}) {
                const auto r = symbol_integrability("s4-remainder", layout, xi, N);
                c.values["s4.N" + std::to_string(int(N))] = r.value;
                if (r.value > prev * (1.0 + 1e-9)) c.verdict = VerdictState::Fail;
                prev = r.value;
            }
        } else {
            c.note = "no remainder integrals wired for this family";
        }
        rep.checks.push_back(c);
    }

    // ---- energy multipliers -----------------------------------------------------
    if (selected(sc, "multipliers")) {
        CheckResult c = make_check("multipliers", VerdictState::Pass);
        const double eps = sc.zone_constants.eps;
        const double t_lo = layout.t0();
        const MultiplierFit ell = multiplier_check("xi2/b", b, g, eps, t_lo, sc.t_max);
        const MultiplierFit red = multiplier_check("b", b, g, eps, t_lo, sc.t_max);
        c.values["xi2_over_b.lambda1"] = ell.lambda1;
        c.values["xi2_over_b.lambda2"] = ell.lambda2;
        c.values["xi2_over_b.lambda3"] = ell.lambda3;
        c.values["b.lambda1"] = red.lambda1;
        c.values["b.lambda2"] = red.lambda2;
        c.values["b.lambda3"] = red.lambda3;
        const double expect = 0.25 * (1.0 - eps * eps);
        if (!ell.pass || !red.pass) c.verdict = VerdictState::Fail;
        if (std::abs(ell.lambda1 - expect) > 1e-12) c.verdict = VerdictState::Fail;
        if (std::abs(red.lambda1 - 1.0) > 1e-12) c.verdict = VerdictState::Fail;
        rep.checks.push_back(c);
    }

    if (selected(sc, "multiplier_decay")) {
        CheckResult c = make_check("multiplier_decay", VerdictState::Pass);
        // a low frequency that stays in the elliptic part of the dissipative
        // zone across the tail window
        const double eps = sc.zone_constants.eps;
        const double t_lo = layout.t0();
        const double se = std::sqrt(1.0 - eps * eps);
        const double xi =
            0.4 * 0.5 * se * std::min(b.value(t_lo), b.value(sc.t_max));
        if (xi <= 0.0) {
            c.verdict = VerdictState::Undetermined;
            c.note = "no admissible dissipative frequency";
        } else {
            std::vector<double> ts;
            const int n = 200;
            for (int k = 0; k <= n; ++k)
                ts.push_back(t_lo + (sc.t_max - t_lo) * k / n);
            const ModeSolution sol = solve_mode(b, g, xi, 1.0, 0.0, ts, sweep_opts);
            const MultiplierDecay d =
                multiplier_decay_check(sol, b, g, "xi2/b", t_lo, sc.t_max);
            c.values["C"] = d.C;
            c.values["worst_ratio"] = d.worst_ratio;
            c.values["xi"] = xi;
            if (!d.applicable)
                c.verdict = VerdictState::Undetermined;
            else if (!d.pass)
                c.verdict = VerdictState::Fail;
        }
        rep.checks.push_back(c);
    }

    // ---- over-damping mode limit ---------------------------------------------
    if (selected(sc, "mode_limit")) {
        CheckResult c = make_check("mode_limit", VerdictState::Pass);
        std::vector<double> ts;
        const double T = sc.t_max;
        const int n = 400;
        for (int k = 0; k <= n; ++k) ts.push_back(T * k / n);
        const ModeSolution sol = solve_mode(b, g, 1.0, 1.0, 0.0, ts, sweep_opts);
        const ModeLimit lim = mode_limit(sol);
        c.values["value"] = lim.value;
        c.values["ut_over_u"] = lim.ut_over_u;
        c.values["converged"] = lim.converged ? 1.0 : 0.0;
        c.values["step_floor_hits"] = sol.stats.hit_step_floor ? 1.0 : 0.0;
        if (!lim.converged) c.verdict = VerdictState::Fail;
        rep.checks.push_back(c);
    }

    // ---- glued envelopes --------------------------------------------------------
    if (selected(sc, "glue")) {
        CheckResult c = make_check("glue", VerdictState::Pass);
        std::vector<double> xis{sc.data.r0};
        xis.push_back(std::max(2.0 * sc.zone_constants.N / g.value(0.0),
                               2.0 * sc.zone_constants.N2 / g.value(0.0)));
        if (xis.back() > 1e6 || !std::isfinite(xis.back())) xis.back() = 100.0;
        for (double xi : xis) {
            const ModeSolution sol = solve_mode(b, g, xi, 1.0, 1.0, t_grid, sweep_opts);
            WindowSup win;
            for (std::size_t k = 1; k < t_grid.size(); ++k) {
                const GluedEnvelope ge =
                    glue_mode_envelope(sc.theorem, layout, xi, t_grid[k], 1.0, 1.0);
                const double measured =
                    std::log(std::max(std::abs(sol.u[k]), 1e-300)) +
                    sc.theorem.beta * std::log(xi);
                win.add(t_grid[k], sc.t_max, guarded_exp(measured - ge.log_u));
            }
            c.values["sup_ratio.xi=" + csv_number(xi)] = win.sup;
            if (!std::isfinite(win.sup) || !win.stable(0.1)) c.verdict = VerdictState::Fail;
        }
        rep.checks.push_back(c);
    }

    // ---- CSV series ---------------------------------------------------------------
    if (opts.want_series) {
        CsvSeries modes_csv;
        modes_csv.name = "modes";
        modes_csv.columns = {"t", "xi", "u_hat", "ut_hat", "energy", "zone"};
        for (std::size_t i = 0; i < xi_grid.size(); ++i)
            for (std::size_t k = 0; k < t_grid.size(); ++k)
                modes_csv.rows.push_back({csv_number(t_grid[k]), csv_number(xi_grid[i]),
                                          csv_number(modes[i].u[k]), csv_number(modes[i].ut[k]),
                                          csv_number(modes[i].energy[k]),
                                          to_string(zone_at(i, t_grid[k]))});
        rep.series.push_back(std::move(modes_csv));

        CsvSeries norms_csv;
        norms_csv.name = "norms";
        norms_csv.columns = {"t",          "norm_u",     "norm_ut", "envelope_u",
                             "envelope_ut", "ratio_u",    "ratio_ut"};
        for (std::size_t k = 0; k < t_grid.size(); ++k)
            norms_csv.rows.push_back({csv_number(t_grid[k]), csv_number(norm_u[k]),
                                      csv_number(norm_ut[k]), csv_number(env_u[k]),
                                      csv_number(env_ut[k]), csv_number(ratio_u.ratio[k]),
                                      csv_number(ratio_ut.ratio[k])});
        rep.series.push_back(std::move(norms_csv));

        CsvSeries zones_csv;
        zones_csv.name = "zones";
        zones_csv.columns = {"curve", "xi", "t"};
        for (const std::string& curve : layout.curve_ids()) {
            for (int i = 0; i <= 32; ++i) {
                const double xi =
                    sc.data.r_min * std::pow(sc.data.r_max / sc.data.r_min, i / 32.0);
                try {
                    const auto t = layout.separating_time(curve, xi);
                    if (t)
                        zones_csv.rows.push_back({curve, csv_number(xi), csv_number(*t)});
                } catch (const BracketError&) {
                    // curve undefined at this frequency; skip the sample
                }
            }
        }
        rep.series.push_back(std::move(zones_csv));

        CsvSeries ratios_csv;
        ratios_csv.name = "ratios";
        ratios_csv.columns = {"t", "ratio_u", "ratio_ut"};
        for (std::size_t k = 0; k < t_grid.size(); ++k)
            ratios_csv.rows.push_back({csv_number(t_grid[k]), csv_number(ratio_u.ratio[k]),
                                       csv_number(ratio_ut.ratio[k])});
        rep.series.push_back(std::move(ratios_csv));
    }

    // ---- overall ------------------------------------------------------------------
    rep.overall_pass = true;
    for (const auto& c : rep.checks) {
        if (!check_ok(c)) {
            rep.overall_pass = false;
            if (rep.failure_reason.empty()) rep.failure_reason = "check failed: " + c.id;
        }
    }
    return rep;
}

} // namespace wavedamp
