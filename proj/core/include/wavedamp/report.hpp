#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavedamp/classify.hpp"

namespace wavedamp {

struct CheckResult {
    std::string id;
    VerdictState verdict = VerdictState::Undetermined;
    std::map<std::string, double> values; // empirical constants, ratios, violations
    std::string note;
};

struct CsvSeries {
    std::string name; // file stem, e.g. "norms"
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows; // pre-formatted cells
};

/// Shortest-round-trip style cell formatting used by every CSV series.
std::string csv_number(double v);

/// Machine-readable verdicts of a scenario run.  Serialisation is byte-stable
/// for identical inputs: keys are ordered and no wall-clock data is included.
struct Report {
    nlohmann::json scenario;        // echoed effective configuration
    nlohmann::json classification;  // kind + evidence + condition reports
    nlohmann::json zones;           // constants, t0, per-frequency chains
    std::vector<CheckResult> checks;
    nlohmann::json sweep;           // solver aggregates
    bool overall_pass = false;
    std::string failure_reason;

    std::vector<CsvSeries> series;  // modes, norms, zone curves, ratios

    nlohmann::json to_json() const;
    const CheckResult* find(const std::string& id) const;
};

/// format "json": <out>/report.json; format "csv": one CSV per series plus
/// report.json.  Returns the list of files written.
std::vector<std::string> emit(const Report& report, const std::string& format,
                              const std::string& out_dir);

nlohmann::json verdict_json(const Verdict& v);
nlohmann::json condition_report_json(const ConditionReport& rep);

} // namespace wavedamp
