// SPDX-License-Identifier: Apache-2.0

#include "prom/harness/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace prom {

std::string RunRecord::classification() const {
    if (completed) return "completed";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "diverged_at %.17g", diverged_at);
    return buf;
}

void write_qoi_csv(const std::string& path, const QoISeries& series) {
    std::ofstream out(path);
    if (!out) throw FormatError("report: cannot open '" + path + "' for writing");
    out << "t,value\n";
    char buf[80];
    for (Index i = 0; i < series.times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", series.times(i), series.values(i));
        out << buf;
    }
}

QoISeries read_qoi_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("report: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,", 0) != 0) {
        throw FormatError("report: '" + path + "' is not a QoI csv");
    }
    std::vector<double> t, v;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw FormatError("report: malformed csv row in '" + path + "'");
        }
        t.push_back(std::stod(line.substr(0, comma)));
        v.push_back(std::stod(line.substr(comma + 1)));
    }
    QoISeries series;
    series.times = Eigen::Map<Vector>(t.data(), static_cast<Index>(t.size()));
    series.values = Eigen::Map<Vector>(v.data(), static_cast<Index>(v.size()));
    return series;
}

void write_run_record(const std::string& path, const RunRecord& record) {
    nlohmann::json j;
    j["label"] = record.label;
    j["completed"] = record.completed;
    j["diverged_at"] = record.diverged_at;
    j["wall_seconds"] = record.wall_seconds;
    j["steps"] = record.steps;
    j["classification"] = record.classification();
    std::vector<std::string> qois;
    for (const auto& q : record.qois) qois.push_back(q.name);
    j["qois"] = qois;
    std::ofstream out(path);
    if (!out) throw FormatError("report: cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

RunRecord read_run_record(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("report: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("report: malformed run record: ") + e.what());
    }
    RunRecord record;
    record.label = j.value("label", "");
    record.completed = j.value("completed", true);
    record.diverged_at = j.value("diverged_at", 0.0);
    record.wall_seconds = j.value("wall_seconds", 0.0);
    record.steps = j.value("steps", Index(0));
    for (const auto& name : j.value("qois", std::vector<std::string>{})) {
        QoISeries s;
        s.name = name;
        record.qois.push_back(s);
    }
    return record;
}

void write_report_json(const std::string& path, const std::string& config_echo,
                       std::uint64_t seed,
                       const std::map<std::string, std::string>& provenance,
                       const std::vector<RunRecord>& runs,
                       const std::vector<ErrorEntry>& errors) {
    nlohmann::json j;
    j["config"] = config_echo;
    j["seed"] = seed;
    j["provenance"] = provenance;
    for (const RunRecord& run : runs) {
        nlohmann::json r;
        r["completed"] = run.completed;
        r["classification"] = run.classification();
        if (!run.completed) r["diverged_at"] = run.diverged_at;
        r["wall_seconds"] = run.wall_seconds;
        r["steps"] = run.steps;
        j["runs"][run.label] = r;
    }
    for (const ErrorEntry& e : errors) {
        nlohmann::json r;
        r["re_percent"] = e.re_percent;
        r["samples"] = e.samples;
        r["truncated"] = e.truncated;
        j["relative_errors"][e.run][e.qoi] = r;
    }
    std::ofstream out(path);
    if (!out) throw FormatError("report: cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

}  // namespace prom
