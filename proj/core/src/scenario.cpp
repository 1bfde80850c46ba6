#include "wavedamp/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "wavedamp/errors.hpp"

namespace wavedamp {

using nlohmann::json;

std::vector<double> Scenario::time_grid() const {
    // Always anchored at t = 0: mode data lives there.  t_min > 0 only shifts
    // where the sampling (and thus the ratio statistics) starts.
    std::vector<double> ts{0.0};
    ts.reserve(static_cast<std::size_t>(t_nodes) + 2);
    if (log_time) {
        const double lo = std::max(t_min, 1e-3);
        for (int i = 0; i <= t_nodes; ++i)
            ts.push_back(lo * std::pow(t_max / lo, double(i) / t_nodes));
    } else {
        for (int i = 0; i <= t_nodes; ++i)
            ts.push_back(t_min + (t_max - t_min) * double(i) / t_nodes);
    }
    if (ts.size() > 1 && ts[1] == 0.0) ts.erase(ts.begin() + 1);
    return ts;
}

double Scenario::effective_classify_horizon() const {
    if (classify_horizon > 0.0) return classify_horizon;
    if (b.family() == Family::DoubleExp || g.family() == Family::DoubleExp) return 6.0;
    return 50.0;
}

std::vector<std::string> known_check_ids() {
    return {"classification", "conditions",  "zones",       "energy",      "dissipation",
            "liouville",      "transforms",  "envelope",    "glue",        "prop_bounds",
            "inequalities",   "integrability", "multipliers", "multiplier_decay", "mode_limit"};
}

std::vector<std::string> default_checks(TheoremId id) {
    std::vector<std::string> base{"classification", "conditions", "zones",     "energy",
                                  "dissipation",    "liouville",  "transforms", "envelope",
                                  "glue"};
    switch (id) {
        case TheoremId::T21:
        case TheoremId::T31:
            base.push_back("prop_bounds");
            base.push_back("integrability");
            break;
        case TheoremId::T41:
        case TheoremId::T51:
            base.push_back("integrability");
            break;
        case TheoremId::T22:
        case TheoremId::T32:
            base.push_back("prop_bounds");
            base.push_back("inequalities");
            break;
        case TheoremId::T42:
        case TheoremId::T52:
            base.push_back("prop_bounds");
            base.push_back("inequalities");
            base.push_back("integrability");
            base.push_back("multipliers");
            base.push_back("multiplier_decay");
            break;
        case TheoremId::T53:
            base.push_back("prop_bounds");
            base.push_back("inequalities");
            base.push_back("multipliers");
            base.push_back("mode_limit");
            break;
        case TheoremId::T54:
            base.push_back("mode_limit");
            break;
    }
    return base;
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

Profile parse_profile(const json& obj, const std::string& where) {
    reject_unknown_keys(obj, {"family", "params"}, where);
    if (!obj.contains("family")) throw ConfigError(where + ": missing 'family'");
    Params params;
    if (obj.contains("params"))
        for (auto it = obj["params"].begin(); it != obj["params"].end(); ++it)
            params[it.key()] = it.value().get<double>();
    return make_profile(obj["family"].get<std::string>(), params);
}

json profile_echo(const Profile& p) {
    json j;
    j["family"] = p.family_name();
    json params;
    for (const auto& [k, v] : p.params()) params[k] = v;
    j["params"] = params;
    return j;
}

ZoneFamily default_zone_family(TheoremId id) {
    switch (id) {
        case TheoremId::T21:
        case TheoremId::T31:
        case TheoremId::T41:
        case TheoremId::T51: return ZoneFamily::TwoZone;
        case TheoremId::T22:
        case TheoremId::T32: return ZoneFamily::FourZoneNonEffective;
        case TheoremId::T42:
        case TheoremId::T52: return ZoneFamily::EffectiveDecaying;
        case TheoremId::T53: return ZoneFamily::FiveZoneOverdamping;
        case TheoremId::T54: return ZoneFamily::UniformlyElliptic;
    }
    return ZoneFamily::TwoZone;
}

} // namespace

Scenario scenario_from_json(const json& cfg) {
    Scenario sc;
    reject_unknown_keys(cfg,
                        {"name", "b", "g", "expected_class", "condition_sets", "zones",
                         "theorem", "data", "grids", "tolerances", "checks"},
                        "scenario");

    if (!cfg.contains("b") || !cfg.contains("g"))
        throw ConfigError("scenario requires 'b' and 'g' profiles");
    if (!cfg.contains("theorem")) throw ConfigError("scenario requires 'theorem'");

    sc.name = cfg.value("name", std::string("unnamed"));
    sc.b = parse_profile(cfg["b"], "b");
    sc.g = parse_profile(cfg["g"], "g");

    if (cfg.contains("expected_class"))
        sc.expected_class = damping_kind_from_string(cfg["expected_class"].get<std::string>());
    if (cfg.contains("condition_sets"))
        for (const auto& s : cfg["condition_sets"])
            sc.condition_sets.push_back(condition_set_from_string(s.get<std::string>()));

    {
        const json& th = cfg["theorem"];
        reject_unknown_keys(th, {"id", "beta", "a", "kappa", "t0", "bprime_branch"}, "theorem");
        if (!th.contains("id")) throw ConfigError("theorem requires 'id'");
        sc.theorem.id = theorem_from_string(th["id"].get<std::string>());
        sc.theorem.beta = th.value("beta", 2.0);
        sc.theorem.a = th.value("a", 0.5);
        sc.theorem.kappa = th.value("kappa", -1.0);
        sc.theorem.t0 = th.value("t0", 0.0);
        sc.theorem.bprime_branch = th.value("bprime_branch", 0);
    }

    sc.zone_family = default_zone_family(sc.theorem.id);
    if (cfg.contains("zones")) {
        const json& z = cfg["zones"];
        reject_unknown_keys(
            z, {"family", "N", "N1", "N2", "eps", "eps1", "eps2", "eps3", "t0"}, "zones");
        if (z.contains("family"))
            sc.zone_family = zone_family_from_string(z["family"].get<std::string>());
        sc.zone_constants.N = z.value("N", sc.zone_constants.N);
        sc.zone_constants.N1 = z.value("N1", sc.zone_constants.N1);
        sc.zone_constants.N2 = z.value("N2", sc.zone_constants.N2);
        sc.zone_constants.eps = z.value("eps", sc.zone_constants.eps);
        sc.zone_constants.eps1 = z.value("eps1", sc.zone_constants.eps1);
        sc.zone_constants.eps2 = z.value("eps2", sc.zone_constants.eps2);
        sc.zone_constants.eps3 = z.value("eps3", sc.zone_constants.eps3);
        sc.zone_constants.t0 = z.value("t0", sc.zone_constants.t0);
    }
    sc.theorem.n2 = sc.zone_constants.N2;

    if (cfg.contains("data")) {
        const json& d = cfg["data"];
        reject_unknown_keys(d,
                            {"shape", "r_min", "r_max", "r0", "sigma", "dim", "nodes",
                             "u0_scale", "u1_scale"},
                            "data");
        const std::string shape = d.value("shape", std::string("log_gaussian"));
        if (shape == "log_gaussian")
            sc.data.shape = DataProfile::Shape::LogGaussian;
        else if (shape == "indicator")
            sc.data.shape = DataProfile::Shape::Indicator;
        else
            throw ConfigError("unknown data shape '" + shape + "'");
        sc.data.r_min = d.value("r_min", sc.data.r_min);
        sc.data.r_max = d.value("r_max", sc.data.r_max);
        sc.data.r0 = d.value("r0", sc.data.r0);
        sc.data.sigma = d.value("sigma", sc.data.sigma);
        sc.data.dim = d.value("dim", sc.data.dim);
        sc.data.nodes = d.value("nodes", sc.data.nodes);
        sc.data.u0_scale = d.value("u0_scale", sc.data.u0_scale);
        sc.data.u1_scale = d.value("u1_scale", sc.data.u1_scale);
    }

    if (cfg.contains("grids")) {
        const json& gr = cfg["grids"];
        reject_unknown_keys(gr, {"t_nodes", "t_min", "t_max", "log_time"}, "grids");
        sc.t_nodes = gr.value("t_nodes", sc.t_nodes);
        sc.t_min = gr.value("t_min", sc.t_min);
        sc.t_max = gr.value("t_max", sc.t_max);
        sc.log_time = gr.value("log_time", sc.log_time);
    }
    if (!(sc.t_max > sc.t_min)) throw ConfigError("grids: t_max must exceed t_min");
    if (sc.t_nodes < 8) throw ConfigError("grids: need at least 8 time nodes");
    sc.zone_constants.t_max = sc.t_max;

    if (cfg.contains("tolerances")) {
        const json& tl = cfg["tolerances"];
        reject_unknown_keys(tl, {"rel_tol", "check_tol", "classify_horizon"}, "tolerances");
        sc.rel_tol = tl.value("rel_tol", sc.rel_tol);
        sc.check_tol = tl.value("check_tol", sc.check_tol);
        sc.classify_horizon = tl.value("classify_horizon", sc.classify_horizon);
    }
    if (!(sc.rel_tol >= 1e-12 && sc.rel_tol <= 1e-3))
        throw ConfigError("tolerances: rel_tol must lie in [1e-12, 1e-3]");

    if (cfg.contains("checks")) {
        const auto known = known_check_ids();
        for (const auto& c : cfg["checks"]) {
            const std::string id = c.get<std::string>();
            if (std::find(known.begin(), known.end(), id) == known.end())
                throw ConfigError("unknown check id '" + id + "'");
            sc.checks.push_back(id);
        }
    } else {
        sc.checks = default_checks(sc.theorem.id);
    }

    // Validate the layout constants early (ordering constraints, -g' cap).
    ZoneLayout layout(sc.zone_family, sc.zone_constants, sc.b, sc.g);

    // Echo of the effective configuration, defaults filled in.
    json echo;
    echo["name"] = sc.name;
    echo["b"] = profile_echo(sc.b);
    echo["g"] = profile_echo(sc.g);
    if (sc.expected_class) echo["expected_class"] = to_string(*sc.expected_class);
    {
        json sets = json::array();
        for (auto s : sc.condition_sets) sets.push_back(to_string(s));
        echo["condition_sets"] = sets;
    }
    echo["zones"] = {{"family", to_string(sc.zone_family)},
                     {"N", sc.zone_constants.N},
                     {"N1", sc.zone_constants.N1},
                     {"N2", sc.zone_constants.N2},
                     {"eps", sc.zone_constants.eps},
                     {"eps1", sc.zone_constants.eps1},
                     {"eps2", sc.zone_constants.eps2},
                     {"eps3", sc.zone_constants.eps3},
                     {"t0", layout.t0()},
                     {"t_max", sc.zone_constants.t_max}};
    echo["theorem"] = {{"id", to_string(sc.theorem.id)}, {"beta", sc.theorem.beta},
                       {"a", sc.theorem.a},             {"kappa", sc.theorem.kappa},
                       {"t0", sc.theorem.t0},           {"bprime_branch", sc.theorem.bprime_branch}};
    echo["data"] = {{"shape", sc.data.shape == DataProfile::Shape::LogGaussian ? "log_gaussian"
                                                                               : "indicator"},
                    {"r_min", sc.data.r_min},
                    {"r_max", sc.data.r_max},
                    {"r0", sc.data.r0},
                    {"sigma", sc.data.sigma},
                    {"dim", sc.data.dim},
                    {"nodes", sc.data.nodes},
                    {"u0_scale", sc.data.u0_scale},
                    {"u1_scale", sc.data.u1_scale}};
    echo["grids"] = {{"t_nodes", sc.t_nodes},
                     {"t_min", sc.t_min},
                     {"t_max", sc.t_max},
                     {"log_time", sc.log_time}};
    echo["tolerances"] = {{"rel_tol", sc.rel_tol},
                          {"check_tol", sc.check_tol},
                          {"classify_horizon", sc.effective_classify_horizon()}};
    echo["checks"] = sc.checks;
    sc.echo = echo;
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("parse error in '" + path + "': " + e.what());
    }
    try {
        return scenario_from_json(cfg);
    } catch (const json::exception& e) {
        throw ConfigError("invalid scenario '" + path + "': " + e.what());
    }
}

} // namespace wavedamp
