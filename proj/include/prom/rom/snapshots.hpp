// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "prom/common.hpp"

namespace prom {

/// Time-stamped state columns with their sampling metadata.
struct SnapshotSet {
    Matrix states;  // N x S, one column per snapshot
    Vector times;   // S
    double sample_interval = 0.0;
    double window_start = 0.0;
    double window_end = 0.0;
    std::string provenance;

    Index state_dim() const { return states.rows(); }
    Index count() const { return states.cols(); }
};

/// Streaming collector wired into a transient run as its step observer.
/// Records the state every `delta_s / dt` steps inside [window_start,
/// window_end]; delta_s must be an integer multiple of dt.
class SnapshotCollector {
public:
    SnapshotCollector(Index state_dim, double t0, double dt, double delta_s,
                      double window_start, double window_end);

    void observe(Index step, double t, const Vector& w);
    SnapshotSet take();

    Index stride() const { return stride_; }

private:
    Index state_dim_;
    double t0_;
    double dt_;
    double delta_s_;
    double window_start_;
    double window_end_;
    Index stride_;
    Index window_offset_steps_;
    std::vector<Vector> columns_;
    std::vector<double> times_;
};

/// Subsamples an in-memory trajectory (uniformly spaced in time) at interval
/// delta_s, keeping the first column.
SnapshotSet collect_snapshots(const Matrix& states, const Vector& times, double delta_s);

}  // namespace prom
