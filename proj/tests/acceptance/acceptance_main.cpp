// Acceptance suite: one pass/fail line per criterion.  Exit code 0 iff every
// criterion passes.  Tolerances and thresholds are pinned in code below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "wavedamp/envelopes.hpp"
#include "wavedamp/errors.hpp"
#include "wavedamp/modes.hpp"
#include "wavedamp/norms.hpp"
#include "wavedamp/runner.hpp"
#include "wavedamp/scenario.hpp"

using namespace wavedamp;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Harness {
    int failures = 0;
    void run(int id, const std::string& label, const std::function<Outcome()>& fn) {
        Outcome out;
        try {
            out = fn();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %2d: %s%s%s\n", out.pass ? "PASS" : "FAIL", id,
                    label.c_str(), out.detail.empty() ? "" : "  -- ", out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
};

std::string fixture(const std::string& name) {
    return std::string(WAVEDAMP_SCENARIO_DIR) + "/" + name;
}

std::vector<double> lin_grid(double t0, double t1, int n) {
    std::vector<double> ts(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) ts[static_cast<std::size_t>(i)] = t0 + (t1 - t0) * i / n;
    return ts;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Closed-form mode for constant btilde.
double constant_mode(double btilde, double xi, double u0, double u1, double t) {
    const double disc = btilde * btilde - 4.0 * xi * xi;
    if (std::abs(disc) < 1e-13) {
        const double r = -0.5 * btilde;
        return (u0 + (u1 - r * u0) * t) * std::exp(r * t);
    }
    if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        const double r1 = 0.5 * (-btilde + sq), r2 = 0.5 * (-btilde - sq);
        const double c1 = (u1 - r2 * u0) / (r1 - r2);
        return c1 * std::exp(r1 * t) + (u0 - c1) * std::exp(r2 * t);
    }
    const double w = 0.5 * std::sqrt(-disc);
    const double a = -0.5 * btilde;
    return std::exp(a * t) * (u0 * std::cos(w * t) + (u1 - a * u0) / w * std::sin(w * t));
}

struct Draw {
    Profile b, g;
    double xi;
    double horizon;
    std::string label;
};

std::vector<Draw> coefficient_draws(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Draw> draws;
    while (static_cast<int>(draws.size()) < count) {
        Draw d;
        const int fb = static_cast<int>(unit(rng) * 3.0);
        const int fg = static_cast<int>(unit(rng) * 3.0);
        auto mk = [&](int f) -> Profile {
            switch (f) {
                case 0:
                    return make_profile(
                        "power", {{"c", 0.3 + 1.5 * unit(rng)}, {"alpha", -2.0 + 1.6 * unit(rng)}});
                case 1:
                    return make_profile(
                        "exp", {{"c", 0.3 + unit(rng)}, {"alpha", -1.0 + 2.0 * unit(rng)}});
                default: return make_profile("const", {{"c", 0.2 + 2.0 * unit(rng)}});
            }
        };
        d.b = mk(fb);
        d.g = mk(fg);
        d.xi = 0.3 + 2.7 * unit(rng);
        d.horizon = 5.0;
        d.label = d.b.family_name() + "/" + d.g.family_name();
        draws.push_back(std::move(d));
    }
    return draws;
}

} // namespace

int main() {
    Harness h;
    std::map<std::string, Report> reports;
    std::map<std::string, Scenario> scenarios;
    std::map<std::string, double> runtimes;

    auto run_bundle = [&](const std::string& file, const std::vector<std::string>* only) {
        Scenario sc = load_scenario(fixture(file));
        if (only) sc.checks = *only;
        RunOptions ropts;
        ropts.want_series = false;
        const auto t0 = std::chrono::steady_clock::now();
        reports[sc.name] = run_scenario(sc, ropts);
        runtimes[sc.name] = seconds_since(t0);
        scenarios[sc.name] = std::move(sc);
    };

    // Full runs for the scenarios that later criteria interrogate in detail;
    // energy-focused runs for the rest of the bundle set.
    const std::vector<std::string> full_runs = {
        "t21_scattering_increasing.json", "t32_noneffective_decaying.json",
        "t42_effective_decaying.json", "t53_overdamping_decaying.json",
        "t54_uniformly_elliptic.json"};
    const std::vector<std::string> energy_runs = {
        "t22_scattering_decaying.json", "t31_noneffective_increasing.json",
        "t41_effective_increasing.json", "t51_overdamping_increasing.json",
        "t52_overdamping_fastdecay.json", "smoke_free_wave.json"};
    const std::vector<std::string> energy_checks = {"classification", "conditions", "zones",
                                                    "energy", "dissipation"};
    for (const auto& f : full_runs) run_bundle(f, nullptr);
    for (const auto& f : energy_runs) run_bundle(f, &energy_checks);

    // ------------------------------------------------------------------ 1
    h.run(1, "closed-form oracle suite (rel err <= 1e-8, < 5 s)", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto ts = lin_grid(0.0, 10.0, 200);
        SolverOptions opts;
        opts.rel_tol = 1e-10;
        struct Case {
            double b, g, xi, u0, u1;
        };
        const Case cases[] = {
            {0.0, 0.0, 2.0, 1.0, 0.0},  {0.0, 0.0, 2.0, 0.0, 1.0},  {2.0, 0.0, 1.0, 1.0, 0.0},
            {0.0, 2.0, 1.0, 1.0, 0.0},  {5.0, 0.0, 1.0, 1.0, -1.0}, {1.0, 0.0, 2.0, 0.0, 1.0},
            {0.5, 1.5, 1.0, 1.0, 2.0},
        };
        double worst = 0.0;
        for (const auto& c : cases) {
            const Profile pb = c.b > 0.0 ? make_profile("const", {{"c", c.b}}) : Profile::zero();
            const Profile pg = c.g > 0.0 ? make_profile("const", {{"c", c.g}}) : Profile::zero();
            const ModeSolution sol = solve_mode(pb, pg, c.xi, c.u0, c.u1, ts, opts);
            const double btilde = c.b + c.g * c.xi * c.xi;
            double sup_diff = 0.0, sup_ref = 0.0;
            for (std::size_t k = 0; k < ts.size(); ++k) {
                sup_diff = std::max(
                    sup_diff, std::abs(sol.u[k] - constant_mode(btilde, c.xi, c.u0, c.u1, ts[k])));
                sup_ref = std::max(sup_ref, std::abs(constant_mode(btilde, c.xi, c.u0, c.u1, ts[k])));
            }
            worst = std::max(worst, sup_diff / sup_ref);
        }
        const double elapsed = seconds_since(t0);
        Outcome out;
        out.pass = worst <= 1e-8 && elapsed < 5.0;
        out.detail = "max rel err " + fmt(worst) + ", " + fmt(elapsed) + " s";
        return out;
    });

    // ------------------------------------------------------------------ 2
    h.run(2, "Liouville identity on 20 random draws + stiff b=e^t", [&] {
        SolverOptions opts;
        opts.rel_tol = 1e-12;
        auto draws = coefficient_draws(20, 20260810u);
        {
            Draw stiff;
            stiff.b = make_profile("exp", {{"c", 1.0}, {"alpha", 1.0}});
            stiff.g = make_profile("const", {{"c", 0.5}});
            stiff.xi = 1.0;
            stiff.horizon = 5.0;
            stiff.label = "stiff b=e^t";
            draws.push_back(std::move(stiff));
        }
        double worst = 0.0;
        int total_asserted = 0;
        for (const auto& d : draws) {
            const auto ts = lin_grid(0.0, d.horizon, 100);
            const FundamentalMatrix fm = fundamental_matrix(d.b, d.g, d.xi, 0.0, ts, opts);
            int asserted = 0;
            for (std::size_t k = 1; k < ts.size(); ++k) {
                const double log_true = -log_delta(d.b, d.g, ts[k], d.xi);
                if (log_true < -600.0) continue;
                const double det_true = std::exp(log_true);
                if (fm.det_condition(k) > 3.0e4 * det_true) continue; // unconditioned
                worst = std::max(worst, std::abs(fm.det(k) - det_true) / det_true);
                ++asserted;
            }
            if (asserted < 3) {
                Outcome out;
                out.pass = false;
                out.detail = "draw " + d.label + ": only " + std::to_string(asserted) +
                             " conditioned points";
                return out;
            }
            total_asserted += asserted;
        }
        Outcome out;
        out.pass = worst <= 1e-6;
        out.detail = "max rel err " + fmt(worst) + " over " + std::to_string(total_asserted) +
                     " conditioned points";
        return out;
    });

    // ------------------------------------------------------------------ 3
    h.run(3, "energy monotonicity + dissipation identity on every bundle", [&] {
        Outcome out;
        for (const auto& [name, rep] : reports) {
            const CheckResult* energy = rep.find("energy");
            const CheckResult* diss = rep.find("dissipation");
            if (!energy || !diss) {
                out.pass = false;
                out.detail = name + ": energy checks missing";
                return out;
            }
            if (energy->verdict != VerdictState::Pass || diss->verdict != VerdictState::Pass) {
                out.pass = false;
                out.detail = name + ": residual " + fmt(diss->values.at("max_step_residual")) +
                             ", increase " + fmt(energy->values.at("max_step_increase"));
                return out;
            }
        }
        out.detail = std::to_string(reports.size()) + " scenarios within 10x solver tolerance";
        return out;
    });

    // ------------------------------------------------------------------ 4
    h.run(4, "transform consistency on 10 random draws", [&] {
        SolverOptions opts;
        opts.rel_tol = 1e-10;
        auto draws = coefficient_draws(8, 777u);
        {
            Draw a;
            a.b = Profile::zero();
            a.g = make_profile("exp", {{"c", 1.0}, {"alpha", 1.0}});
            a.xi = 0.7;
            a.horizon = 5.0;
            a.label = "g=e^t";
            draws.push_back(std::move(a));
            Draw bdraw;
            bdraw.b = make_profile("power", {{"c", 1.0}, {"alpha", -2.0}});
            bdraw.g = make_profile("exp", {{"c", 0.5}, {"alpha", -1.0}});
            bdraw.xi = 1.3;
            bdraw.horizon = 5.0;
            bdraw.label = "b=(1+t)^-2";
            draws.push_back(std::move(bdraw));
        }
        double worst = 0.0;
        std::string worst_label;
        for (const auto& d : draws) {
            const TransformCheck tc = check_transforms(d.b, d.g, d.xi, 1.0, 0.5, d.horizon, opts);
            const double dev = std::max(tc.deviation_v, tc.deviation_w);
            if (dev > worst) {
                worst = dev;
                worst_label = d.label;
            }
        }
        Outcome out;
        out.pass = worst <= 1e-6;
        out.detail = "max deviation " + fmt(worst) + " (" + worst_label + ")";
        return out;
    });

    // ------------------------------------------------------------------ 5
    h.run(5, "T2.1 envelope ratios finite and window-stable, < 60 s", [&] {
        const Report& rep = reports.at("t21_scattering_increasing");
        Outcome out;
        const CheckResult* env = rep.find("envelope");
        if (!env) {
            out.pass = false;
            out.detail = "envelope check missing";
            return out;
        }
        out.pass = env->verdict == VerdictState::Pass &&
                   runtimes.at("t21_scattering_increasing") < 60.0;
        out.detail = "sup_u " + fmt(env->values.at("sup_ratio_u")) + ", sup_ut " +
                     fmt(env->values.at("sup_ratio_ut")) + ", " +
                     fmt(runtimes.at("t21_scattering_increasing")) + " s";
        return out;
    });

    // ------------------------------------------------------------------ 6
    h.run(6, "T3.2 ratio bounded on [1,100], raw tail slope <= -0.15", [&] {
        const Report& rep = reports.at("t32_noneffective_decaying");
        Outcome out;
        const CheckResult* env = rep.find("envelope");
        if (!env) {
            out.pass = false;
            out.detail = "envelope check missing";
            return out;
        }
        const double slope = env->values.at("tail_slope_u");
        out.pass = env->verdict == VerdictState::Pass && slope <= -0.25 + 0.1;
        out.detail = "sup " + fmt(env->values.at("sup_ratio_u")) + ", raw slope " + fmt(slope);
        return out;
    });

    // ------------------------------------------------------------------ 7
    h.run(7, "T4.2 parabolic envelope bounded, tail slope <= -1.3", [&] {
        const Report& rep = reports.at("t42_effective_decaying");
        Outcome out;
        const CheckResult* env = rep.find("envelope");
        if (!env) {
            out.pass = false;
            out.detail = "envelope check missing";
            return out;
        }
        const double slope = env->values.at("tail_slope_u");
        out.pass = env->verdict == VerdictState::Pass && slope <= -1.5 + 0.2;
        out.detail = "sup " + fmt(env->values.at("sup_ratio_u")) + ", raw slope " + fmt(slope);
        return out;
    });

    // ------------------------------------------------------------------ 8
    h.run(8, "over-damping non-decay (T5.3 mode limit, T5.4 completes)", [&] {
        Outcome out;
        const Report& r53 = reports.at("t53_overdamping_decaying");
        const CheckResult* env = r53.find("envelope");
        const CheckResult* lim = r53.find("mode_limit");
        if (!env || !lim) {
            out.pass = false;
            out.detail = "T5.3 checks missing";
            return out;
        }
        const double value = lim->values.at("value");
        // frozen stiff-solver oracle (tests/oracle/mode_limit_oracle.py)
        const double oracle = 0.464630872869;
        bool ok = env->verdict == VerdictState::Pass &&
                  lim->values.at("converged") == 1.0 && std::abs(value) > 0.1 &&
                  std::abs(value - oracle) <= 1e-6;
        const Report& r54 = reports.at("t54_uniformly_elliptic");
        const double floor_hits = r54.sweep.value("step_floor_hits", 1.0);
        ok = ok && floor_hits == 0.0;
        out.pass = ok;
        out.detail = "limit " + fmt(value) + " (oracle " + fmt(oracle) + "), T5.4 floor hits " +
                     fmt(floor_hits);
        return out;
    });

    // ------------------------------------------------------------------ 9
    h.run(9, "pointwise inequality suite: zero violations on 1e4-point grids", [&] {
        Outcome out;
        double worst = 0.0;
        {
            const Scenario& sc = scenarios.at("t42_effective_decaying");
            const ZoneLayout layout(sc.zone_family, sc.zone_constants, sc.b, sc.g);
            for (const auto& r : pointwise_inequality_suite(
                     layout, inequality_ids(ZoneFamily::EffectiveDecaying), 10000)) {
                worst = std::max(worst, r.max_violation);
                if (r.points < 5000) out.pass = false;
            }
        }
        {
            const Scenario& sc = scenarios.at("t53_overdamping_decaying");
            const ZoneLayout layout(sc.zone_family, sc.zone_constants, sc.b, sc.g);
            for (const auto& r : pointwise_inequality_suite(
                     layout, inequality_ids(ZoneFamily::FiveZoneOverdamping), 10000)) {
                worst = std::max(worst, r.max_violation);
                if (r.points < 5000) out.pass = false;
            }
        }
        {
            const Scenario& sc = scenarios.at("t32_noneffective_decaying");
            const ZoneLayout layout(sc.zone_family, sc.zone_constants, sc.b, sc.g);
            for (const auto& r : pointwise_inequality_suite(
                     layout, inequality_ids(ZoneFamily::FourZoneNonEffective), 10000)) {
                worst = std::max(worst, r.max_violation);
                if (r.points < 5000) out.pass = false;
            }
        }
        const double margin = five_zone_hyperbolic_margin(0.1);
        if (std::abs(margin - 0.3797) > 1e-4) out.pass = false;
        if (worst > 0.0) out.pass = false;
        out.detail = "max violation " + fmt(worst) + ", f(0.1) = " + fmt(margin);
        return out;
    });

    // ----------------------------------------------------------------- 10
    h.run(10, "multiplier suite: lambda1 = 0.2475, EM7 decay holds", [&] {
        Outcome out;
        const Scenario& sc = scenarios.at("t42_effective_decaying");
        const MultiplierFit ell = multiplier_check("xi2/b", sc.b, sc.g, 0.1, 5.0, 100.0);
        const MultiplierFit red = multiplier_check("b", sc.b, sc.g, 0.1, 5.0, 100.0);
        bool ok = ell.pass && red.pass;
        ok = ok && std::abs(ell.lambda1 - 0.2475) <= 1e-12;
        ok = ok && std::isfinite(ell.lambda2) && std::isfinite(ell.lambda3);
        // Lemma-EM7 decay inequality with eps = 1/2 on a dissipative mode
        SolverOptions opts;
        opts.rel_tol = 1e-10;
        const auto ts = lin_grid(0.0, 100.0, 400);
        const ModeSolution sol = solve_mode(sc.b, sc.g, 0.02, 1.0, 0.0, ts, opts);
        const MultiplierDecay d = multiplier_decay_check(sol, sc.b, sc.g, "xi2/b", 0.0, 100.0);
        ok = ok && d.applicable && d.pass;
        out.pass = ok;
        out.detail = "lambda1 " + fmt(ell.lambda1) + ", EM7 worst ratio " + fmt(d.worst_ratio);
        return out;
    });

    // ----------------------------------------------------------------- 11
    h.run(11, "symbol integrability: 2/N and the elliptic remainder", [&] {
        Outcome out;
        ZoneConstants c;
        c.t_max = 50.0;
        const ZoneLayout two(ZoneFamily::TwoZone, c, Profile::zero(),
                             make_profile("exp", {{"c", 1.0}, {"alpha", 1.0}}));
        double worst = 0.0;
        for (double N : {1.0, 2.0, 4.0}) {
            const auto r = symbol_integrability("s2-remainder", two, 1.0, N);
            worst = std::max(worst, std::abs(r.value - 2.0 / N));
            if (!r.converged) out.pass = false;
        }
        const Scenario& sc = scenarios.at("t42_effective_decaying");
        const ZoneLayout eff(sc.zone_family, sc.zone_constants, sc.b, sc.g);
        double prev = std::numeric_limits<double>::infinity();
        for (double N : {10.0, 20.0, 40.0}) {
            const auto r = symbol_integrability("s4-remainder", eff, 5000.0, N);
            if (!std::isfinite(r.value) || r.value > prev * (1.0 + 1e-12)) out.pass = false;
            prev = r.value;
        }
        if (worst > 1e-6) out.pass = false;
        out.detail = "max |value - 2/N| = " + fmt(worst);
        return out;
    });

    // ----------------------------------------------------------------- 12
    h.run(12, "proposition bound suite: empirical constants finite and stable", [&] {
        Outcome out;
        std::string detail;
        for (const char* name : {"t21_scattering_increasing", "t32_noneffective_decaying"}) {
            const Report& rep = reports.at(name);
            const CheckResult* pb = rep.find("prop_bounds");
            if (!pb || pb->verdict != VerdictState::Pass) {
                out.pass = false;
                out.detail = std::string(name) + ": prop_bounds failed";
                return out;
            }
            for (const auto& [k, v] : pb->values)
                if (k.size() > 2 && k.substr(k.size() - 2) == ".C")
                    detail += k + "=" + fmt(v) + " ";
        }
        out.detail = detail;
        return out;
    });

    std::printf("%d/12 criteria passed\n", 12 - h.failures);
    return h.failures == 0 ? 0 : 1;
}
