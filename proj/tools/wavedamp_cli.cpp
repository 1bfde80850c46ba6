// Command line front end: classify coefficients, build zone decompositions,
// solve single modes or full sweeps, and run the check suites defined by a
// scenario configuration.
//
// Exit codes: 0 all selected checks pass, 1 check failure, 2 configuration
// error, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "wavedamp/envelopes.hpp"
#include "wavedamp/errors.hpp"
#include "wavedamp/report.hpp"
#include "wavedamp/runner.hpp"
#include "wavedamp/scenario.hpp"

namespace {

using namespace wavedamp;

struct CommonArgs {
    std::string config;
    std::string out = "out";
    int workers = 0;
    double tol = 0.0; // 0 -> scenario default
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
    auto* c = cmd->add_option("--config", args.config, "scenario configuration file");
    if (config_required) c->required();
    cmd->add_option("--out", args.out, "output directory");
    cmd->add_option("--workers", args.workers, "worker threads (default: hardware)");
    cmd->add_option("--tol", args.tol, "override solver rel_tol");
    cmd->add_option("--format", args.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

Scenario load(const CommonArgs& args) {
    Scenario sc = load_scenario(args.config);
    if (args.tol > 0.0) {
        sc.rel_tol = args.tol;
        sc.echo["tolerances"]["rel_tol"] = args.tol;
    }
    return sc;
}

int run_checks(const CommonArgs& args, const std::vector<std::string>* only) {
    Scenario sc = load(args);
    if (only) sc.checks = *only;
    RunOptions ropts;
    ropts.workers = args.workers;
    ropts.want_series = args.format == "csv";
    const Report rep = run_scenario(sc, ropts);
    const auto files = emit(rep, args.format, args.out);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
    for (const auto& c : rep.checks)
        std::cout << (c.verdict == VerdictState::Pass || c.verdict == VerdictState::Boundary
                          ? "[PASS] "
                          : "[FAIL] ")
                  << c.id << (c.note.empty() ? "" : "  (" + c.note + ")") << "\n";
    std::cout << (rep.overall_pass ? "overall: pass" : "overall: FAIL") << "\n";
    return rep.overall_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"damped-wave verification laboratory"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* cmd_classify = app.add_subcommand("classify", "classify the friction coefficient");
    add_common(cmd_classify, args);

    auto* cmd_zones = app.add_subcommand("zones", "emit the zone decomposition");
    add_common(cmd_zones, args);

    auto* cmd_mode = app.add_subcommand("mode", "solve a single Fourier mode");
    add_common(cmd_mode, args);
    double mode_xi = 1.0, mode_u0 = 1.0, mode_u1 = 0.0;
    cmd_mode->add_option("--xi", mode_xi, "frequency magnitude");
    cmd_mode->add_option("--u0", mode_u0, "initial value");
    cmd_mode->add_option("--u1", mode_u1, "initial velocity");

    auto* cmd_sweep = app.add_subcommand("sweep", "mode sweep plus norm series");
    add_common(cmd_sweep, args);

    auto* cmd_check = app.add_subcommand("check", "run the scenario's check selection");
    add_common(cmd_check, args, false);
    bool list_checks = false;
    std::vector<std::string> only;
    cmd_check->add_flag("--list", list_checks, "list check, bound and inequality ids");
    cmd_check->add_option("--only", only, "run a subset of check ids")->delimiter(',');

    auto* cmd_all = app.add_subcommand("all", "run everything the scenario selects");
    add_common(cmd_all, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_check->parsed() && list_checks) {
            std::cout << "checks:\n";
            for (const auto& id : known_check_ids()) std::cout << "  " << id << "\n";
            std::cout << "bounds:\n";
            for (const auto& id : bound_id_names()) std::cout << "  " << id << "\n";
            std::cout << "inequalities:\n";
            for (auto fam :
                 {ZoneFamily::FourZoneNonEffective, ZoneFamily::EffectiveDecaying,
                  ZoneFamily::FiveZoneOverdamping})
                for (const auto& id : inequality_ids(fam)) std::cout << "  " << id << "\n";
            std::cout << "integrability:\n";
            for (const auto& id : integrability_ids()) std::cout << "  " << id << "\n";
            return 0;
        }

        if (cmd_classify->parsed()) {
            Scenario sc = load(args);
            const DampingClass cls =
                classify_friction(sc.b, sc.effective_classify_horizon(), GridSpec{});
            std::cout << "classification: " << to_string(cls.kind) << "\n";
            for (const auto& v : cls.evidence)
                std::cout << "  " << v.condition << ": " << to_string(v.state)
                          << " (witness " << v.witness << ")"
                          << (v.note.empty() ? "" : "  " + v.note) << "\n";
            if (sc.expected_class && cls.kind != *sc.expected_class) {
                std::cout << "expected " << to_string(*sc.expected_class)
                          << ": hypothesis violation\n";
                return 1;
            }
            return 0;
        }

        if (cmd_zones->parsed()) {
            std::vector<std::string> zone_checks{"zones"};
            return run_checks(args, &zone_checks);
        }

        if (cmd_mode->parsed()) {
            Scenario sc = load(args);
            SolverOptions sopts;
            sopts.rel_tol = sc.rel_tol;
            const auto grid = sc.time_grid();
            const ModeSolution sol =
                solve_mode(sc.b, sc.g, mode_xi, mode_u0, mode_u1, grid, sopts);
            const ZoneLayout layout(sc.zone_family, sc.zone_constants, sc.b, sc.g);
            const auto chain = layout.zone_chain(mode_xi);
            auto zone_at = [&](double t) {
                for (const auto& seg : chain)
                    if (t <= seg.t_end) return to_string(seg.zone);
                return to_string(chain.back().zone);
            };
            Report rep;
            CsvSeries csv;
            csv.name = "mode";
            csv.columns = {"t", "xi", "u_hat", "ut_hat", "energy", "zone"};
            for (std::size_t k = 0; k < grid.size(); ++k)
                csv.rows.push_back({csv_number(grid[k]), csv_number(mode_xi),
                                    csv_number(sol.u[k]), csv_number(sol.ut[k]),
                                    csv_number(sol.energy[k]), zone_at(grid[k])});
            rep.scenario = sc.echo;
            rep.sweep["steps"] = sol.stats.steps;
            rep.sweep["rejected"] = sol.stats.rejected;
            rep.overall_pass = true;
            rep.series.push_back(std::move(csv));
            const auto files = emit(rep, "csv", args.out);
            for (const auto& f : files) std::cout << "wrote " << f << "\n";
            return 0;
        }

        if (cmd_sweep->parsed()) {
            CommonArgs sweep_args = args;
            sweep_args.format = "csv";
            std::vector<std::string> sweep_checks{"zones", "energy", "dissipation", "envelope"};
            return run_checks(sweep_args, &sweep_checks);
        }

        if (cmd_check->parsed()) {
            if (args.config.empty())
                throw ConfigError("check requires --config (or use --list)");
            return run_checks(args, only.empty() ? nullptr : &only);
        }

        if (cmd_all->parsed()) return run_checks(args, nullptr);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
