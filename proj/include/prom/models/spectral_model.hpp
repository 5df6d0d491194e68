// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "prom/core/model.hpp"
#include "prom/models/quadratic_model.hpp"

namespace prom {

/// Incompressible Navier-Stokes in rotational form on a periodic box of side
/// 2 pi L, semi-discretized by a pseudo-spectral Fourier collocation method
/// (2D or 3D). The state vector is the physical-space velocity field, one
/// component block after another; transforms, 2/3-rule dealiasing of the
/// quadratic term, and the divergence-free projection happen inside every
/// right-hand-side evaluation:
///
///   du/dt = P[v x omega] - nu (-Laplace) v         (projected, dealiased)
///
/// written as du/dt + f(u) = 0 with f = -rhs. The Jacobian is exposed as an
/// exact matrix-free operator; implicit stage systems are solved by a
/// Fourier-diagonal splitting iteration (the shifted viscous part is diagonal
/// per mode and dominates at stage shifts 1/(a_ii dt)).
class SpectralNSModel : public SemiDiscreteModel, public QuadraticStructure {
public:
    using Complex = std::complex<double>;
    using CArray = Eigen::ArrayXcd;

    struct Config {
        int spatial_dim = 2;       // 2 or 3
        Index resolution = 64;     // per axis, power of two
        double viscosity = 1e-3;
        double length_scale = 1.0;   // L
        double velocity_scale = 1.0; // V0
        bool include_nonlinear = true;
    };

    explicit SpectralNSModel(const Config& config);
    ~SpectralNSModel() override;
    SpectralNSModel(const SpectralNSModel&) = delete;
    SpectralNSModel& operator=(const SpectralNSModel&) = delete;

    Index dim() const override { return static_cast<Index>(config_.spatial_dim) * npts_; }
    std::string name() const override { return "spectral"; }
    std::vector<StateBlock> state_blocks() const override;

    Vector f_eval(const Vector& u, const ParamPoint& mu) const override;
    Vector jacobian_apply(const Vector& u, const ParamPoint& mu,
                          const Vector& x) const override;
    Matrix jacobian_apply_block(const Vector& u, const ParamPoint& mu,
                                const Matrix& X) const override;
    Vector solve_shifted_jacobian(const Vector& u, const ParamPoint& mu, double c,
                                  const Vector& b) const override;

    /// du/dt for a physical-space velocity state.
    Vector rhs(const Vector& u) const;

    /// Coefficient-space right-hand side (one array per velocity component).
    std::vector<CArray> rhs_coefficients(const std::vector<CArray>& vhat) const;

    std::vector<CArray> to_coefficients(const Vector& u) const;
    Vector from_coefficients(const std::vector<CArray>& vhat) const;

    /// Taylor-Green initial velocity field (classical single-mode field; the
    /// 3D variant has vz = 0).
    Vector taylor_green_initial() const;

    double kinetic_energy(const Vector& u) const;
    double enstrophy_dissipation(const Vector& u) const;

    /// Largest |k . vhat| over all modes of the normalized coefficients.
    double max_divergence(const Vector& u) const;

    Vector project_divergence_free(const Vector& u) const;

    /// Deterministic random solenoidal field, band-limited to |m| <= max_mode
    /// per axis with a 1/k^2 amplitude profile, scaled to the requested rms
    /// speed. Used to seed multi-mode experiments.
    Vector random_solenoidal(double rms_speed, int max_mode, std::uint64_t seed) const;

    // QuadraticStructure: f(u) = A u + H(u, u) exactly (dealiasing and the
    // projection are linear, the cross product is the only bilinear piece).
    Vector constant_term(const ParamPoint& mu) const override;
    Vector linear_apply(const Vector& x, const ParamPoint& mu) const override;
    Vector bilinear_apply(const Vector& x, const Vector& y,
                          const ParamPoint& mu) const override;

    const Config& config() const { return config_; }
    Index points() const { return npts_; }
    Index resolution() const { return config_.resolution; }

    /// Flattened physical grid index of (ix, iy[, iz]).
    Index grid_index(Index ix, Index iy, Index iz = 0) const;
    /// Coordinate of grid line i along any axis.
    double coord(Index i) const;

private:
    struct Fft;  // FFTW plans and aligned scratch buffers

    CArray forward(const double* in) const;             // normalized by 1/npts
    void inverse(const CArray& in, double* out) const;  // unnormalized c2r

    std::vector<CArray> curl(const std::vector<CArray>& vhat) const;
    void project(std::vector<CArray>& what) const;
    void dealias(CArray& a) const;

    /// Nonlinear term N(a, b) = 0.5 (a x omega_b + b x omega_a), projected and
    /// dealiased, in coefficient space; inputs must be dealiased already.
    std::vector<CArray> cross_bilinear(const std::vector<Vector>& aphys,
                                       const std::vector<CArray>& ahat,
                                       const std::vector<Vector>& bphys,
                                       const std::vector<CArray>& bhat) const;

    std::vector<Vector> components_physical(const std::vector<CArray>& hat) const;
    std::vector<CArray> split_forward_dealias(const Vector& u) const;

    Config config_;
    Index npts_ = 0;
    Index nspec_ = 0;
    Vector ksq_;                  // |k|^2 per spectral index
    std::vector<Vector> kvec_;    // k components per spectral index
    Eigen::ArrayXd mask_;         // 2/3-rule dealias mask (0/1)
    std::unique_ptr<Fft> fft_;
    mutable std::mutex fft_mutex_;
};

}  // namespace prom
