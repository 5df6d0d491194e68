// SPDX-License-Identifier: Apache-2.0

#include "prom/hyper/ecsw.hpp"

#include "prom/hyper/nnls.hpp"

#include <json.hpp>

#include <fstream>

namespace prom {

EcswTrainingSystem assemble_training(const SemiDiscreteModel& model,
                                     const ReducedBasis& basis,
                                     const LeftBasisStrategy& strategy,
                                     const SnapshotSet& training, const ParamPoint& mu,
                                     double stage_shift, double epsilon) {
    if (training.count() < 1) {
        throw ConfigError("ecsw: empty training set");
    }
    if (training.state_dim() != model.dim()) {
        throw ContractError("ecsw: training snapshots do not match the model dimension");
    }
    const Index n = basis.n();
    const Index cells = model.cell_count();
    const Index s = training.count();

    Matrix mv;
    if (strategy.petrov_galerkin()) {
        mv = Matrix(model.dim(), n);
        for (Index j = 0; j < n; ++j) mv.col(j) = model.mass_apply(basis.v.col(j));
    }

    EcswTrainingSystem sys;
    sys.g = Matrix(n * s, cells);
    sys.epsilon = epsilon;
    sys.n_cells = cells;
    for (Index k = 0; k < s; ++k) {
        const Vector u = training.states.col(k);
        Vector f = model.f_eval(u, mu);
        Matrix w;
        if (strategy.petrov_galerkin()) {
            Matrix stage_jv = model.jacobian_apply_block(u, mu, basis.v);
            if (stage_shift != 0.0) stage_jv += stage_shift * mv;
            ThetaOp theta = strategy.weighting();
            w = theta.is_identity() ? stage_jv : theta.apply(stage_jv, f);
        } else {
            w = basis.v;
        }
        // column e of this block: f_e * W.row(e)^T
        sys.g.middleRows(k * n, n) = w.transpose() * f.asDiagonal();
        sys.snapshot_indices.push_back(k);
    }
    sys.b = sys.g.rowwise().sum();
    return sys;
}

EcswSampleSet nnls_solve(const Matrix& g, const Vector& b, double epsilon) {
    if (epsilon <= 0.0 || epsilon >= 1.0) {
        throw ContractError("ecsw: training tolerance must lie in (0, 1)");
    }
    NnlsResult res = nnls_lawson_hanson(g, b, epsilon);
    EcswSampleSet sample;
    sample.epsilon = epsilon;
    const double bnorm = b.norm();
    sample.achieved_residual = bnorm > 0.0 ? res.residual_norm / bnorm : 0.0;
    std::vector<double> weights;
    for (Index e = 0; e < res.x.size(); ++e) {
        if (res.x(e) > 0.0) {
            sample.cells.push_back(e);
            weights.push_back(res.x(e));
        }
    }
    sample.weights = Eigen::Map<Vector>(weights.data(), static_cast<Index>(weights.size()));
    if (sample.cells.empty()) {
        throw SolverError("ecsw: sampling produced an empty cell set");
    }
    return sample;
}

Vector hyperreduced_residual(const SemiDiscreteModel& model, const ReducedBasis& basis,
                             const LeftBasisStrategy& strategy,
                             const EcswSampleSet& sample, const Vector& y,
                             const ParamPoint& mu) {
    if (sample.cells.empty()) {
        throw ContractError("ecsw: empty sample set");
    }
    for (Index e : sample.cells) {
        if (e < 0 || e >= model.cell_count()) {
            throw FormatError("ecsw: sample references out-of-range cell " +
                              std::to_string(e));
        }
    }
    const Index n = basis.n();
    Vector u = basis.reconstruct(y);
    Vector udot = Vector::Zero(model.dim());
    Vector q = Vector::Zero(n);
    for (Index i = 0; i < static_cast<Index>(sample.cells.size()); ++i) {
        const Index e = sample.cells[static_cast<size_t>(i)];
        const double re = model.residual_row(e, u, udot, mu);
        Vector w_row;
        if (strategy.petrov_galerkin()) {
            SparseVector jrow;
            model.jacobian_row(e, u, mu, jrow);
            w_row = Vector::Zero(n);
            for (SparseVector::InnerIterator it(jrow); it; ++it) {
                w_row += it.value() * basis.v.row(it.index()).transpose();
            }
            if (strategy.kind == RomStrategyKind::theta_weighted ||
                strategy.kind == RomStrategyKind::l1_irls) {
                throw ContractError("ecsw: weighted test bases are not supported online");
            }
        } else {
            w_row = basis.v.row(e).transpose();
        }
        q += sample.weights(i) * re * w_row;
    }
    return q;
}

void save_sample_set(const EcswSampleSet& sample, const std::string& path) {
    nlohmann::json j;
    j["cells"] = sample.cells;
    std::vector<double> w(sample.weights.data(), sample.weights.data() + sample.weights.size());
    j["weights"] = w;
    j["epsilon"] = sample.epsilon;
    j["achieved_residual"] = sample.achieved_residual;
    j["basis_provenance"] = sample.basis_provenance;
    std::ofstream out(path);
    if (!out) throw FormatError("ecsw: cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

EcswSampleSet load_sample_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("ecsw: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("ecsw: malformed sample file: ") + e.what());
    }
    EcswSampleSet sample;
    try {
        sample.cells = j.at("cells").get<std::vector<Index>>();
        std::vector<double> w = j.at("weights").get<std::vector<double>>();
        sample.weights = Eigen::Map<Vector>(w.data(), static_cast<Index>(w.size()));
        sample.epsilon = j.at("epsilon").get<double>();
        sample.achieved_residual = j.at("achieved_residual").get<double>();
        sample.basis_provenance = j.value("basis_provenance", "");
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("ecsw: missing field in sample file: ") + e.what());
    }
    if (sample.cells.size() != static_cast<size_t>(sample.weights.size())) {
        throw FormatError("ecsw: cells and weights disagree in length");
    }
    for (Index i = 0; i < sample.weights.size(); ++i) {
        if (!(sample.weights(i) > 0.0)) {
            throw FormatError("ecsw: nonpositive weight in sample file");
        }
    }
    return sample;
}

}  // namespace prom
