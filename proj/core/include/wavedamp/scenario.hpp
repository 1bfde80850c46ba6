#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavedamp/classify.hpp"
#include "wavedamp/envelopes.hpp"
#include "wavedamp/norms.hpp"
#include "wavedamp/profile.hpp"
#include "wavedamp/zones.hpp"

namespace wavedamp {

/// A configured experiment: coefficients, expected classification, zone
/// layout, theorem envelope parameters, data profile, grids and tolerances.
struct Scenario {
    std::string name;
    Profile b;
    Profile g;
    std::optional<DampingKind> expected_class;
    std::vector<ConditionSet> condition_sets;
    ZoneFamily zone_family = ZoneFamily::TwoZone;
    ZoneConstants zone_constants;
    EnvelopeSpec theorem;
    DataProfile data;

    int t_nodes = 160;
    double t_min = 0.0;
    double t_max = 10.0;
    bool log_time = false;

    double rel_tol = 1e-10;
    double check_tol = 1e-6;
    double classify_horizon = 0.0; // 0 -> family default (50, or 6 for doubleexp)

    std::vector<std::string> checks; // selected check ids
    nlohmann::json echo;             // effective configuration with defaults

    std::vector<double> time_grid() const;
    double effective_classify_horizon() const;
};

/// Check ids the runner knows; `check --list` prints these together with the
/// bound and inequality ids.
std::vector<std::string> known_check_ids();

/// Default check selection for a theorem.
std::vector<std::string> default_checks(TheoremId id);

Scenario scenario_from_json(const nlohmann::json& cfg);
Scenario load_scenario(const std::string& path);

} // namespace wavedamp
