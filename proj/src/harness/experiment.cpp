// SPDX-License-Identifier: Apache-2.0

#include "prom/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "prom/core/model.hpp"
#include "prom/harness/hash.hpp"
#include "prom/harness/snapshot_io.hpp"
#include "prom/hyper/hyper_reduced.hpp"
#include "prom/models/burgers_model.hpp"
#include "prom/models/spectral_model.hpp"
#include "prom/rom/precompute.hpp"
#include "prom/rom/reduced_system.hpp"

namespace prom {

namespace {

Index sample_stride(double dt, double interval) {
    const double ratio = interval / dt;
    const auto stride = static_cast<Index>(std::llround(ratio));
    if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio) {
        throw ConfigError("qoi: sampling interval is not an integer multiple of dt");
    }
    return stride;
}

class WallTimer {
public:
    WallTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

Experiment::Experiment(IniConfig config, std::string out_dir, std::uint64_t seed)
    : config_(std::move(config)), out_dir_(std::move(out_dir)), seed_(seed) {
    std::filesystem::create_directories(out_dir_);
}

std::string Experiment::path(const std::string& name) const {
    if (!name.empty() && name.front() == '/') return name;
    return (std::filesystem::path(out_dir_) / name).string();
}

TimeScheme Experiment::scheme_from_name(const std::string& name) const {
    if (name == "dirk2") return TimeScheme::dirk2;
    if (name == "dirk3") return TimeScheme::dirk3;
    if (name == "bdf3") return TimeScheme::bdf3;
    throw ConfigError("time: unknown integrator '" + name + "'");
}

NewtonConfig Experiment::newton_from(const std::string& section) const {
    NewtonConfig cfg;
    cfg.atol = config_.get_double(section, "newton_atol", 1e-10);
    cfg.rtol = config_.get_double(section, "newton_rtol", 1e-8);
    cfg.max_iterations =
        static_cast<int>(config_.get_index(section, "newton_max_iterations", 20));
    cfg.validate();
    return cfg;
}

double Experiment::re_sample_interval() const {
    return config_.get_double("qoi", "sample_interval",
                              config_.get_double("time", "dt"));
}

std::unique_ptr<SemiDiscreteModel> Experiment::build_model() const {
    const std::string kind = config_.get_string("model", "kind");
    if (kind == "burgers") {
        BurgersModel::Config cfg;
        cfg.n = config_.get_index("model", "n", 2048);
        cfg.domain_length = config_.get_double("model", "domain_length", 1.0);
        cfg.viscosity = config_.get_double("model", "viscosity", 1e-4);
        cfg.upwind_order = static_cast<int>(config_.get_index("model", "upwind_order", 1));
        return std::make_unique<BurgersModel>(cfg);
    }
    if (kind == "spectral") {
        SpectralNSModel::Config cfg;
        cfg.spatial_dim = static_cast<int>(config_.get_index("model", "dimension", 2));
        cfg.resolution = config_.get_index("model", "resolution", 128);
        cfg.length_scale = config_.get_double("model", "length_scale", 1.0);
        cfg.velocity_scale = config_.get_double("model", "velocity_scale", 1.0);
        if (config_.has("model", "viscosity")) {
            cfg.viscosity = config_.get_double("model", "viscosity");
        } else {
            const double re = config_.get_double("model", "reynolds", 1600.0);
            cfg.viscosity = cfg.velocity_scale * cfg.length_scale / re;
        }
        return std::make_unique<SpectralNSModel>(cfg);
    }
    throw ConfigError("model: unknown kind '" + kind + "'");
}

Vector Experiment::initial_state(const SemiDiscreteModel& model) const {
    if (const auto* burgers = dynamic_cast<const BurgersModel*>(&model)) {
        const double mean = config_.get_double("model", "init_mean", 0.5);
        const double amp = config_.get_double("model", "init_amplitude", 0.5);
        return burgers->sine_initial_condition(mean, amp);
    }
    if (const auto* spectral = dynamic_cast<const SpectralNSModel*>(&model)) {
        Vector u = spectral->taylor_green_initial();
        const double perturbation = config_.get_double("model", "perturbation", 0.0);
        if (perturbation > 0.0) {
            const int modes =
                static_cast<int>(config_.get_index("model", "perturbation_modes", 8));
            const auto pseed = static_cast<std::uint64_t>(
                config_.get_index("model", "perturbation_seed",
                                  static_cast<Index>(seed_)));
            const double rms = perturbation * spectral->config().velocity_scale;
            u += spectral->random_solenoidal(rms, modes, pseed);
        }
        return u;
    }
    throw ConfigError("model: no initial condition rule for this model");
}

std::vector<QoIProbe> Experiment::probes(const SemiDiscreteModel& model) const {
    std::vector<QoIProbe> list;
    if (config_.get_bool("qoi", "probe", true)) {
        QoIProbe p;
        p.kind = QoIKind::point_value;
        p.name = "probe";
        p.block = config_.get_string("qoi", "probe_block", "");
        p.frac[0] = config_.get_double("qoi", "probe_frac_x",
                                       config_.get_double("qoi", "probe_frac", 0.75));
        p.frac[1] = config_.get_double("qoi", "probe_frac_y", 0.25);
        p.frac[2] = config_.get_double("qoi", "probe_frac_z", 0.5);
        list.push_back(p);
    }
    if (config_.get_bool("qoi", "energy", true)) {
        QoIProbe p;
        p.kind = QoIKind::volume_kinetic_energy;
        p.name = "energy";
        list.push_back(p);
    }
    const bool spectral = dynamic_cast<const SpectralNSModel*>(&model) != nullptr;
    if (config_.get_bool("qoi", "enstrophy", spectral)) {
        QoIProbe p;
        p.kind = QoIKind::enstrophy_dissipation;
        p.name = "enstrophy";
        list.push_back(p);
    }
    if (list.empty()) {
        throw ConfigError("qoi: no quantities of interest enabled");
    }
    return list;
}

TimeScheme Experiment::rom_scheme() const {
    return scheme_from_name(config_.get_string(
        "rom", "integrator", config_.get_string("time", "integrator", "dirk2")));
}

double Experiment::rom_dt() const {
    return config_.get_double("rom", "dt", config_.get_double("time", "dt"));
}

double Experiment::rom_stage_shift() const {
    const double dt = rom_dt();
    switch (rom_scheme()) {
        case TimeScheme::dirk2:
            return 1.0 / (dt * dirk2_tableau().a(0, 0));
        case TimeScheme::dirk3:
            return 1.0 / (dt * dirk3_tableau().a(0, 0));
        case TimeScheme::bdf3:
            return 11.0 / (6.0 * dt);
    }
    throw ConfigError("rom: unknown integrator");
}

RunRecord Experiment::stage_hdm() {
    auto model = build_model();
    Vector u0 = initial_state(*model);
    const ParamPoint mu = ParamPoint::none();

    TransientOptions opts;
    opts.scheme = scheme_from_name(config_.get_string("time", "integrator", "dirk2"));
    opts.t0 = config_.get_double("time", "t0", 0.0);
    opts.t_end = config_.get_double("time", "t_end");
    opts.dt = config_.get_double("time", "dt");

    const double snap_interval =
        config_.get_double("snapshots", "sample_interval", 10.0 * opts.dt);
    const double w0 = config_.get_double("snapshots", "window_start", opts.t0);
    const double w1 = config_.get_double("snapshots", "window_end", opts.t_end);
    SnapshotCollector collector(model->dim(), opts.t0, opts.dt, snap_interval, w0, w1);

    const auto qoi_list = probes(*model);
    const Index re_stride = sample_stride(opts.dt, re_sample_interval());
    std::vector<double> times;
    std::vector<std::vector<double>> histories(qoi_list.size());

    ModelOdeSystem system(*model, mu);
    NewtonStageSolver solver(system, newton_from("time"));

    WallTimer timer;
    TransientResult result = run_transient(
        solver, opts, u0, [&](Index step, double t, const Vector& w) {
            collector.observe(step, t, w);
            if (step % re_stride == 0) {
                times.push_back(t);
                for (size_t q = 0; q < qoi_list.size(); ++q) {
                    histories[q].push_back(evaluate_qoi(qoi_list[q], *model, w));
                }
            }
        });
    const double wall = timer.seconds();

    SnapshotSet snaps = collector.take();
    snaps.provenance = sha1_hex(config_.canonical_text());
    write_snapshots(path(config_.get_string("snapshots", "file", "hdm.snap")), snaps);

    RunRecord record;
    record.label = "hdm";
    record.completed = result.completed;
    record.diverged_at = result.diverged_at;
    record.wall_seconds = wall;
    record.steps = result.steps;
    for (size_t q = 0; q < qoi_list.size(); ++q) {
        QoISeries series;
        series.name = qoi_list[q].name;
        series.times = Eigen::Map<Vector>(times.data(), static_cast<Index>(times.size()));
        series.values = Eigen::Map<Vector>(histories[q].data(),
                                           static_cast<Index>(histories[q].size()));
        write_qoi_csv(path("hdm_" + series.name + ".csv"), series);
        record.qois.push_back(std::move(series));
    }
    write_run_record(path("hdm_run.json"), record);
    return record;
}

ReducedBasis Experiment::stage_pod() {
    auto model = build_model();
    const std::string snap_path = path(config_.get_string("snapshots", "file", "hdm.snap"));
    if (!std::filesystem::exists(snap_path)) {
        throw PipelineError("pod: snapshots not found at '" + snap_path +
                            "' (run the hdm stage first)");
    }
    SnapshotSet snaps = read_snapshots(snap_path);

    std::string offset_kind = config_.get_string("pod", "offset", "");
    if (offset_kind.empty()) {
        offset_kind = dynamic_cast<const SpectralNSModel*>(model.get()) ? "zero" : "initial";
    }
    Vector u0;
    if (offset_kind == "zero") {
        u0 = Vector::Zero(model->dim());
    } else if (offset_kind == "initial") {
        u0 = initial_state(*model);
    } else {
        throw ConfigError("pod: unknown offset rule '" + offset_kind + "'");
    }

    PodOptions options;
    options.explicit_n = config_.get_index("pod", "n", 0);
    options.energy = config_.get_double("pod", "energy", options.explicit_n > 0 ? 0.0 : 0.9999);
    options.normalize = config_.get_bool("pod", "normalize", true);

    ReducedBasis basis = build_pod(snaps, u0, options, model->state_blocks());
    basis.provenance = sha1_file(snap_path);
    write_basis(path(config_.get_string("pod", "file", "basis.snap")), basis);
    return basis;
}

Experiment::RomArtifacts Experiment::run_reduced(const std::string& label,
                                                 ReducedStageEvaluator& evaluator,
                                                 const ReducedBasis& basis,
                                                 const SemiDiscreteModel& model) {
    TransientOptions opts;
    opts.scheme = rom_scheme();
    opts.t0 = config_.get_double("time", "t0", 0.0);
    opts.t_end = config_.get_double("time", "t_end");
    opts.dt = rom_dt();

    Vector y0 = basis.project(initial_state(model));
    const Index re_stride = sample_stride(opts.dt, re_sample_interval());

    RomStageSolver solver(evaluator, newton_from("rom"));
    std::vector<Vector> samples;
    std::vector<double> times;
    WallTimer timer;
    TransientResult result =
        run_transient(solver, opts, y0, [&](Index step, double t, const Vector& y) {
            if (step % re_stride == 0) {
                samples.push_back(y);
                times.push_back(t);
            }
        });
    const double wall = timer.seconds();

    RomArtifacts artifacts;
    artifacts.record.label = label;
    artifacts.record.completed = result.completed;
    artifacts.record.diverged_at = result.diverged_at;
    artifacts.record.wall_seconds = wall;
    artifacts.record.steps = result.steps;
    artifacts.reduced_states = Matrix(basis.n(), static_cast<Index>(samples.size()));
    artifacts.sample_times = Vector(static_cast<Index>(times.size()));
    for (size_t j = 0; j < samples.size(); ++j) {
        artifacts.reduced_states.col(static_cast<Index>(j)) = samples[j];
        artifacts.sample_times(static_cast<Index>(j)) = times[j];
    }
    return artifacts;
}

void Experiment::write_reduced_outputs(const std::string& label, RomArtifacts& artifacts,
                                       const ReducedBasis& basis,
                                       const SemiDiscreteModel& model) {
    // QoIs are computed on the reconstructed high-dimensional states, outside
    // the timed stepping loop.
    const auto qoi_list = probes(model);
    const Index count = artifacts.reduced_states.cols();
    for (const QoIProbe& probe : qoi_list) {
        QoISeries series;
        series.name = probe.name;
        series.times = artifacts.sample_times;
        series.values = Vector(count);
        for (Index j = 0; j < count; ++j) {
            Vector u = basis.reconstruct(artifacts.reduced_states.col(j));
            series.values(j) = evaluate_qoi(probe, model, u);
        }
        write_qoi_csv(path(label + "_" + series.name + ".csv"), series);
        artifacts.record.qois.push_back(std::move(series));
    }
    write_run_record(path(label + "_run.json"), artifacts.record);
}

RunRecord Experiment::stage_rom() {
    auto model = build_model();
    const std::string basis_path = path(config_.get_string("pod", "file", "basis.snap"));
    if (!std::filesystem::exists(basis_path)) {
        throw PipelineError("rom: basis not found at '" + basis_path +
                            "' (run the pod stage first)");
    }
    ReducedBasis basis = read_basis(basis_path);
    const ParamPoint mu = ParamPoint::none();

    RecomputePolicy policy =
        config_.get_string("rom", "recompute", "per_timestep") == "per_iteration"
            ? RecomputePolicy::per_iteration
            : RecomputePolicy::per_timestep;
    LeftBasisStrategy strategy =
        strategy_from_name(config_.get_string("rom", "strategy", "lspg"), policy);

    std::string precompute_mode = config_.get_string("rom", "precompute", "auto");
    bool use_precompute = false;
    if (precompute_mode == "on") {
        use_precompute = true;
    } else if (precompute_mode == "auto") {
        use_precompute = dynamic_cast<const QuadraticStructure*>(model.get()) != nullptr &&
                         (strategy.kind == RomStrategyKind::galerkin ||
                          strategy.kind == RomStrategyKind::lspg);
    } else if (precompute_mode != "off") {
        throw ConfigError("rom: precompute must be auto, on, or off");
    }

    RomArtifacts artifacts;
    if (use_precompute) {
        QuadraticRomOperators ops = precompute_quadratic(*model, basis, mu);
        PrecomputedReducedEvaluator evaluator(std::move(ops), strategy);
        artifacts = run_reduced("rom", evaluator, basis, *model);
    } else {
        DirectReducedEvaluator evaluator(*model, mu, basis, strategy);
        artifacts = run_reduced("rom", evaluator, basis, *model);
    }
    write_reduced_outputs("rom", artifacts, basis, *model);
    return artifacts.record;
}

EcswSampleSet Experiment::stage_ecsw() {
    auto model = build_model();
    const std::string basis_path = path(config_.get_string("pod", "file", "basis.snap"));
    const std::string snap_path = path(config_.get_string("snapshots", "file", "hdm.snap"));
    if (!std::filesystem::exists(basis_path) || !std::filesystem::exists(snap_path)) {
        throw PipelineError("ecsw: requires both snapshots and a basis");
    }
    ReducedBasis basis = read_basis(basis_path);
    SnapshotSet snaps = read_snapshots(snap_path);

    const Index stride = config_.get_index("ecsw", "training_stride", 10);
    if (stride < 1) throw ConfigError("ecsw: training stride must be positive");
    SnapshotSet training = collect_snapshots(
        snaps.states, snaps.times,
        snaps.times.size() > 1
            ? (snaps.times(1) - snaps.times(0)) * static_cast<double>(stride)
            : 1.0);

    RecomputePolicy policy = RecomputePolicy::per_timestep;
    LeftBasisStrategy strategy =
        strategy_from_name(config_.get_string("rom", "strategy", "lspg"), policy);
    const double epsilon = config_.get_double("ecsw", "epsilon", 1e-2);
    const double shift = strategy.petrov_galerkin() ? rom_stage_shift() : 0.0;

    EcswTrainingSystem sys = assemble_training(*model, basis, strategy, training,
                                               ParamPoint::none(), shift, epsilon);
    EcswSampleSet sample = nnls_solve(sys.g, sys.b, epsilon);
    sample.basis_provenance = sha1_file(basis_path);
    save_sample_set(sample, path(config_.get_string("ecsw", "file", "ecsw.json")));
    return sample;
}

RunRecord Experiment::stage_hprom() {
    auto model = build_model();
    const std::string basis_path = path(config_.get_string("pod", "file", "basis.snap"));
    const std::string sample_path = path(config_.get_string("ecsw", "file", "ecsw.json"));
    if (!std::filesystem::exists(basis_path) || !std::filesystem::exists(sample_path)) {
        throw PipelineError("hprom: requires a basis and an ecsw sample set");
    }
    ReducedBasis basis = read_basis(basis_path);
    EcswSampleSet sample = load_sample_set(sample_path);

    RecomputePolicy policy =
        config_.get_string("rom", "recompute", "per_timestep") == "per_iteration"
            ? RecomputePolicy::per_iteration
            : RecomputePolicy::per_timestep;
    LeftBasisStrategy strategy =
        strategy_from_name(config_.get_string("rom", "strategy", "lspg"), policy);

    HyperreducedEvaluator evaluator(*model, ParamPoint::none(), basis, strategy, sample);
    RomArtifacts artifacts = run_reduced("hprom", evaluator, basis, *model);
    write_reduced_outputs("hprom", artifacts, basis, *model);
    return artifacts.record;
}

void Experiment::stage_compare() {
    const std::string reference_dir =
        config_.get_string("report", "reference_dir", out_dir_);
    auto ref_path = [&](const std::string& name) {
        return (std::filesystem::path(reference_dir) / name).string();
    };
    if (!std::filesystem::exists(ref_path("hdm_run.json"))) {
        throw PipelineError("compare: no hdm run record found");
    }
    RunRecord hdm = read_run_record(ref_path("hdm_run.json"));

    std::vector<RunRecord> runs;
    std::vector<ErrorEntry> errors;
    runs.push_back(hdm);

    const double t_max = config_.get_double("report", "t_max",
                                            config_.get_double("time", "t_end"));
    for (const std::string label : {"rom", "hprom"}) {
        const std::string record_path = path(label + "_run.json");
        if (!std::filesystem::exists(record_path)) continue;
        RunRecord run = read_run_record(record_path);
        for (const auto& q : run.qois) {
            QoISeries ref = read_qoi_csv(ref_path("hdm_" + q.name + ".csv"));
            QoISeries got = read_qoi_csv(path(label + "_" + q.name + ".csv"));
            Index limit = 0;
            while (limit < ref.times.size() && ref.times(limit) <= t_max + 1e-12) ++limit;
            const Index common = std::min(limit, std::min(ref.times.size(), got.times.size()));
            ErrorEntry entry;
            entry.run = label;
            entry.qoi = q.name;
            entry.samples = common;
            entry.truncated = got.times.size() < limit;
            if (common >= 1) {
                entry.re_percent = relative_error_percent(ref.values.head(common),
                                                          got.values.head(common));
            } else {
                entry.re_percent = std::numeric_limits<double>::quiet_NaN();
            }
            errors.push_back(entry);
        }
        runs.push_back(run);
    }

    std::map<std::string, std::string> provenance;
    provenance["config"] = sha1_hex(config_.canonical_text());
    for (const std::string artifact :
         {"hdm.snap", "basis.snap", "ecsw.json"}) {
        const std::string p = path(artifact);
        if (std::filesystem::exists(p)) provenance[artifact] = sha1_file(p);
    }
    write_report_json(path(config_.get_string("report", "file", "report.json")),
                      config_.canonical_text(), seed_, provenance, runs, errors);
}

void Experiment::stage_sweep() {
    std::vector<double> energies{0.90, 0.99, 0.999, 0.9999};
    if (config_.has("sweep", "energies")) {
        energies = config_.get_double_list("sweep", "energies");
    }
    std::vector<std::string> strategies{"galerkin", "lspg"};
    if (config_.has("sweep", "strategies")) {
        strategies = config_.get_string_list("sweep", "strategies");
    }
    const bool hyper = config_.get_bool("sweep", "hyper", false);

    if (!std::filesystem::exists(path(config_.get_string("snapshots", "file", "hdm.snap")))) {
        stage_hdm();
    }

    for (const std::string& strategy : strategies) {
        for (double energy : energies) {
            std::ostringstream tag;
            tag << "sweep_" << strategy << "_" << energy;
            IniConfig sub = config_;
            sub.set("pod", "energy", std::to_string(energy));
            sub.set("rom", "strategy", strategy);
            sub.set("snapshots", "file",
                    path(config_.get_string("snapshots", "file", "hdm.snap")));
            sub.set("report", "reference_dir", out_dir_);
            Experiment child(sub, path(tag.str()), seed_);
            child.stage_pod();
            child.stage_rom();
            if (hyper && strategy != "galerkin") {
                child.stage_ecsw();
                child.stage_hprom();
            }
            child.stage_compare();
        }
    }
}

void Experiment::run_stage(const std::string& stage) {
    if (stage == "hdm") {
        stage_hdm();
    } else if (stage == "pod") {
        stage_pod();
    } else if (stage == "rom") {
        stage_rom();
    } else if (stage == "ecsw") {
        stage_ecsw();
    } else if (stage == "hprom") {
        stage_hprom();
    } else if (stage == "compare") {
        stage_compare();
    } else if (stage == "sweep") {
        stage_sweep();
    } else {
        throw ConfigError("experiment: unknown stage '" + stage + "'");
    }
}

void Experiment::run_stages(const std::vector<std::string>& stages) {
    for (const std::string& stage : stages) run_stage(stage);
}

}  // namespace prom
