// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "prom/common.hpp"

namespace prom {

struct QoISeries {
    std::string name;
    Vector times;
    Vector values;
};

/// Outcome of one simulation run (HDM, PROM, or HPROM).
struct RunRecord {
    std::string label;
    bool completed = true;
    double diverged_at = 0.0;
    double wall_seconds = 0.0;  // time-stepping loop only
    Index steps = 0;
    std::vector<QoISeries> qois;

    std::string classification() const;
};

/// Relative error of one run's QoI against the reference (HDM) series.
struct ErrorEntry {
    std::string run;
    std::string qoi;
    double re_percent = 0.0;
    Index samples = 0;      // samples actually compared
    bool truncated = false; // run diverged before covering the full window
};

void write_qoi_csv(const std::string& path, const QoISeries& series);
QoISeries read_qoi_csv(const std::string& path);

void write_run_record(const std::string& path, const RunRecord& record);
RunRecord read_run_record(const std::string& path);

/// Final report: configuration echo, provenance hashes, per-run outcomes and
/// relative errors.
void write_report_json(const std::string& path, const std::string& config_echo,
                       std::uint64_t seed,
                       const std::map<std::string, std::string>& provenance,
                       const std::vector<RunRecord>& runs,
                       const std::vector<ErrorEntry>& errors);

}  // namespace prom
