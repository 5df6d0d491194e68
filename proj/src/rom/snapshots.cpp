// SPDX-License-Identifier: Apache-2.0

#include "prom/rom/snapshots.hpp"

#include <cmath>

namespace prom {

namespace {

Index interval_stride(double delta_s, double dt) {
    if (dt <= 0.0 || delta_s <= 0.0) {
        throw ConfigError("snapshots: dt and sampling interval must be positive");
    }
    const double ratio = delta_s / dt;
    const auto stride = static_cast<Index>(std::llround(ratio));
    if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio) {
        throw ConfigError("snapshots: sampling interval is not an integer multiple of dt");
    }
    return stride;
}

}  // namespace

SnapshotCollector::SnapshotCollector(Index state_dim, double t0, double dt,
                                     double delta_s, double window_start,
                                     double window_end)
    : state_dim_(state_dim),
      t0_(t0),
      dt_(dt),
      delta_s_(delta_s),
      window_start_(window_start),
      window_end_(window_end) {
    if (window_end_ < window_start_) {
        throw ConfigError("snapshots: empty collection window");
    }
    stride_ = interval_stride(delta_s, dt);
    window_offset_steps_ = static_cast<Index>(std::llround((window_start_ - t0_) / dt_));
}

void SnapshotCollector::observe(Index step, double t, const Vector& w) {
    if (w.size() != state_dim_) {
        throw ContractError("snapshots: state dimension changed mid-run");
    }
    const double slack = 0.5 * dt_;
    if (t < window_start_ - slack || t > window_end_ + slack) return;
    const Index offset = step - window_offset_steps_;
    if (offset < 0 || offset % stride_ != 0) return;
    columns_.push_back(w);
    times_.push_back(t);
}

SnapshotSet SnapshotCollector::take() {
    SnapshotSet set;
    set.states = Matrix(state_dim_, static_cast<Index>(columns_.size()));
    set.times = Vector(static_cast<Index>(times_.size()));
    for (size_t j = 0; j < columns_.size(); ++j) {
        set.states.col(static_cast<Index>(j)) = columns_[j];
        set.times(static_cast<Index>(j)) = times_[j];
    }
    set.sample_interval = delta_s_;
    set.window_start = window_start_;
    set.window_end = window_end_;
    columns_.clear();
    times_.clear();
    return set;
}

SnapshotSet collect_snapshots(const Matrix& states, const Vector& times, double delta_s) {
    if (states.cols() != times.size() || states.cols() < 1) {
        throw ContractError("snapshots: trajectory and timestamps disagree");
    }
    if (states.cols() == 1) {
        SnapshotSet set;
        set.states = states;
        set.times = times;
        set.sample_interval = delta_s;
        set.window_start = set.window_end = times(0);
        return set;
    }
    const double dt = times(1) - times(0);
    for (Index j = 2; j < times.size(); ++j) {
        if (std::abs((times(j) - times(j - 1)) - dt) > 1e-9 * std::abs(dt)) {
            throw ContractError("snapshots: trajectory is not uniformly sampled");
        }
    }
    const Index stride = interval_stride(delta_s, dt);
    const Index count = (states.cols() - 1) / stride + 1;
    SnapshotSet set;
    set.states = Matrix(states.rows(), count);
    set.times = Vector(count);
    for (Index j = 0; j < count; ++j) {
        set.states.col(j) = states.col(j * stride);
        set.times(j) = times(j * stride);
    }
    set.sample_interval = delta_s;
    set.window_start = times(0);
    set.window_end = times(times.size() - 1);
    return set;
}

}  // namespace prom
