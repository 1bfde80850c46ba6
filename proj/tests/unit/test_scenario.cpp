#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "wavedamp/errors.hpp"
#include "wavedamp/runner.hpp"
#include "wavedamp/scenario.hpp"

using namespace wavedamp;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) {
    return std::string(WAVEDAMP_SCENARIO_DIR) + "/" + name;
}

json minimal_config() {
    return json{{"name", "mini"},
                {"b", {{"family", "power"}, {"params", {{"c", 0.5}, {"alpha", -1.0}}}}},
                {"g", {{"family", "exp"}, {"params", {{"c", 0.5}, {"alpha", -1.0}}}}},
                {"theorem", {{"id", "T3.2"}}}};
}

} // namespace

TEST_CASE("bundled scenarios load and validate") {
    for (const char* name :
         {"t21_scattering_increasing.json", "t22_scattering_decaying.json",
          "t31_noneffective_increasing.json", "t32_noneffective_decaying.json",
          "t41_effective_increasing.json", "t42_effective_decaying.json",
          "t51_overdamping_increasing.json", "t52_overdamping_fastdecay.json",
          "t53_overdamping_decaying.json", "t54_uniformly_elliptic.json",
          "smoke_free_wave.json"}) {
        CAPTURE(name);
        const Scenario sc = load_scenario(fixture(name));
        CHECK_FALSE(sc.name.empty());
        CHECK_FALSE(sc.checks.empty());
    }
    const Scenario t41 = load_scenario(fixture("t41_effective_increasing.json"));
    CHECK(t41.theorem.id == TheoremId::T41);
}

TEST_CASE("defaults are filled and echoed") {
    const Scenario sc = scenario_from_json(minimal_config());
    CHECK(sc.zone_family == ZoneFamily::FourZoneNonEffective);
    CHECK(sc.echo["tolerances"]["rel_tol"].get<double>() == 1e-10);
    CHECK(sc.echo["zones"]["N1"].get<double>() == 10.0);
    CHECK(sc.echo["data"]["nodes"].get<int>() == 160);
    CHECK_FALSE(sc.echo["checks"].empty());
}

TEST_CASE("unknown keys are rejected") {
    json cfg = minimal_config();
    cfg["grdis"] = json::object();
    CHECK_THROWS_AS(scenario_from_json(cfg), ConfigError);

    json cfg2 = minimal_config();
    cfg2["theorem"]["kappa2"] = 1.0;
    CHECK_THROWS_AS(scenario_from_json(cfg2), ConfigError);
}

TEST_CASE("five-zone ordering is a validation error") {
    json cfg = minimal_config();
    cfg["theorem"]["id"] = "T5.3";
    cfg["b"] = {{"family", "exp"}, {"params", {{"c", 1.0}, {"alpha", 1.0}}}};
    cfg["zones"] = {{"eps1", 0.8}, {"eps2", 0.9}}; // eps2 > eps1
    CHECK_THROWS_AS(scenario_from_json(cfg), ConfigError);
}

TEST_CASE("time grid is anchored at zero") {
    json cfg = minimal_config();
    cfg["grids"] = {{"t_nodes", 16}, {"t_min", 1.0}, {"t_max", 100.0}, {"log_time", true}};
    const Scenario sc = scenario_from_json(cfg);
    const auto ts = sc.time_grid();
    CHECK(ts.front() == 0.0);
    CHECK(ts[1] == doctest::Approx(1.0));
    CHECK(ts.back() == doctest::Approx(100.0));
}

TEST_CASE("smoke scenario conserves energy and reports deterministically") {
    const Scenario sc = load_scenario(fixture("smoke_free_wave.json"));
    RunOptions serial;
    serial.workers = 1;
    const Report r1 = run_scenario(sc, serial);
    CHECK(r1.overall_pass);
    const CheckResult* energy = r1.find("energy");
    REQUIRE(energy != nullptr);
    CHECK(energy->verdict == VerdictState::Pass);
    CHECK(energy->values.at("max_step_increase") <= 10.0 * sc.rel_tol);

    RunOptions parallel;
    parallel.workers = 4;
    const Report r2 = run_scenario(sc, parallel);
    CHECK(r1.to_json().dump(2) == r2.to_json().dump(2));
}

TEST_CASE("hypothesis violation aborts the envelope checks") {
    json cfg = minimal_config();
    cfg["expected_class"] = "Effective"; // 0.5/(1+t) is non-effective
    cfg["grids"] = {{"t_nodes", 16}, {"t_max", 10.0}};
    const Scenario sc = scenario_from_json(cfg);
    const Report rep = run_scenario(sc);
    CHECK_FALSE(rep.overall_pass);
    CHECK(rep.failure_reason.find("hypothesis violation") != std::string::npos);
    CHECK(rep.find("envelope") == nullptr); // aborted before the sweep
}

TEST_CASE("report emission is byte-stable") {
    const Scenario sc = load_scenario(fixture("smoke_free_wave.json"));
    const Report rep = run_scenario(sc);
    const auto dir1 = std::filesystem::temp_directory_path() / "wavedamp_emit1";
    const auto dir2 = std::filesystem::temp_directory_path() / "wavedamp_emit2";
    emit(rep, "csv", dir1.string());
    emit(rep, "csv", dir2.string());
    for (const char* f : {"report.json", "modes.csv", "norms.csv"}) {
        std::ifstream a(dir1 / f), b(dir2 / f);
        REQUIRE(a);
        REQUIRE(b);
        const std::string sa((std::istreambuf_iterator<char>(a)),
                             std::istreambuf_iterator<char>());
        const std::string sb((std::istreambuf_iterator<char>(b)),
                             std::istreambuf_iterator<char>());
        CHECK(sa == sb);
    }
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("empty check selection still reports classification and zones") {
    json cfg = minimal_config();
    cfg["checks"] = json::array();
    cfg["grids"] = {{"t_nodes", 16}, {"t_max", 10.0}};
    const Scenario sc = scenario_from_json(cfg);
    const Report rep = run_scenario(sc);
    CHECK(rep.checks.empty());
    CHECK(rep.overall_pass);
    CHECK(rep.classification.contains("kind"));
    CHECK(rep.zones.contains("chains"));
}
