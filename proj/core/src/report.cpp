#include "wavedamp/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wavedamp/errors.hpp"

namespace wavedamp {

using nlohmann::json;

json verdict_json(const Verdict& v) {
    json j;
    j["condition"] = v.condition;
    j["state"] = to_string(v.state);
    j["witness"] = v.witness;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

json condition_report_json(const ConditionReport& rep) {
    json j;
    j["set"] = to_string(rep.set);
    json verdicts = json::array();
    for (const auto& v : rep.verdicts) verdicts.push_back(verdict_json(v));
    j["verdicts"] = verdicts;
    json fitted;
    for (const auto& [k, val] : rep.fitted) fitted[k] = val;
    j["fitted"] = fitted;
    j["all_pass"] = rep.all_pass();
    return j;
}

const CheckResult* Report::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return &c;
    return nullptr;
}

json Report::to_json() const {
    json j;
    j["scenario"] = scenario;
    j["classification"] = classification;
    j["zones"] = zones;
    json cj;
    for (const auto& c : checks) {
        json one;
        one["verdict"] = to_string(c.verdict);
        json values;
        for (const auto& [k, v] : c.values) values[k] = v;
        one["values"] = values;
        if (!c.note.empty()) one["note"] = c.note;
        cj[c.id] = one;
    }
    j["checks"] = cj;
    j["sweep"] = sweep;
    j["overall_pass"] = overall_pass;
    if (!failure_reason.empty()) j["failure_reason"] = failure_reason;
    return j;
}

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void write_csv(const CsvSeries& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw NumericalError("cannot write '" + path + "'");
    for (std::size_t i = 0; i < s.columns.size(); ++i)
        out << (i ? "," : "") << s.columns[i];
    out << "\n";
    for (const auto& row : s.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

} // namespace

std::vector<std::string> emit(const Report& report, const std::string& format,
                              const std::string& out_dir) {
    if (format != "json" && format != "csv")
        throw ConfigError("unknown output format '" + format + "'");
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;

    const std::string report_path = out_dir + "/report.json";
    {
        std::ofstream out(report_path);
        if (!out) throw NumericalError("cannot write '" + report_path + "'");
        out << report.to_json().dump(2) << "\n";
    }
    written.push_back(report_path);

    if (format == "csv") {
        for (const auto& s : report.series) {
            const std::string path = out_dir + "/" + s.name + ".csv";
            write_csv(s, path);
            written.push_back(path);
        }
    }
    return written;
}

} // namespace wavedamp
