// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "prom/harness/config.hpp"
#include "prom/harness/qoi.hpp"
#include "prom/harness/report.hpp"
#include "prom/hyper/ecsw.hpp"
#include "prom/rom/pod.hpp"
#include "prom/timeint/integrators.hpp"

namespace prom {

/// Experiment pipeline over one configuration: builds the model, runs the
/// HDM, compresses snapshots, runs PROM/HPROM variants, trains ECSW, and
/// emits CSV histories plus a JSON report into the output directory.
///
/// Stages: hdm, pod, rom, ecsw, hprom, compare, sweep. Later stages read the
/// artifacts earlier ones wrote, so they can run in separate invocations.
class Experiment {
public:
    Experiment(IniConfig config, std::string out_dir, std::uint64_t seed);

    void run_stage(const std::string& stage);
    void run_stages(const std::vector<std::string>& stages);

    RunRecord stage_hdm();
    ReducedBasis stage_pod();
    RunRecord stage_rom();
    EcswSampleSet stage_ecsw();
    RunRecord stage_hprom();
    void stage_compare();
    void stage_sweep();

    std::unique_ptr<SemiDiscreteModel> build_model() const;
    Vector initial_state(const SemiDiscreteModel& model) const;
    std::vector<QoIProbe> probes(const SemiDiscreteModel& model) const;

    const IniConfig& config() const { return config_; }
    const std::string& out_dir() const { return out_dir_; }
    std::string path(const std::string& name) const;

    TimeScheme rom_scheme() const;
    double rom_dt() const;
    /// Stage shift 1/(a_ii dt) (DIRK) or 11/(6 dt) (BDF3) the online solves
    /// will use; ECSW training bakes the same shift into its test basis.
    double rom_stage_shift() const;

private:
    struct RomArtifacts {
        RunRecord record;
        Matrix reduced_states;  // n x samples
        Vector sample_times;
    };

    RomArtifacts run_reduced(const std::string& label, ReducedStageEvaluator& evaluator,
                             const ReducedBasis& basis, const SemiDiscreteModel& model);
    void write_reduced_outputs(const std::string& label, RomArtifacts& artifacts,
                               const ReducedBasis& basis, const SemiDiscreteModel& model);
    TimeScheme scheme_from_name(const std::string& name) const;
    NewtonConfig newton_from(const std::string& section) const;
    double re_sample_interval() const;

    IniConfig config_;
    std::string out_dir_;
    std::uint64_t seed_;
};

}  // namespace prom
