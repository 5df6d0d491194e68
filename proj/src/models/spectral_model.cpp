// SPDX-License-Identifier: Apache-2.0

#include "prom/models/spectral_model.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

namespace prom {

namespace {

bool power_of_two(Index n) { return n >= 4 && (n & (n - 1)) == 0; }

}  // namespace

struct SpectralNSModel::Fft {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    double* real_buf = nullptr;
    fftw_complex* spec_buf = nullptr;
    Index npts = 0;
    Index nspec = 0;

    Fft(int dim, Index r) {
        npts = 1;
        for (int a = 0; a < dim; ++a) npts *= r;
        nspec = npts / r * (r / 2 + 1);
        real_buf = fftw_alloc_real(static_cast<size_t>(npts));
        spec_buf = fftw_alloc_complex(static_cast<size_t>(nspec));
        const int n = static_cast<int>(r);
        if (dim == 2) {
            fwd = fftw_plan_dft_r2c_2d(n, n, real_buf, spec_buf, FFTW_ESTIMATE);
            inv = fftw_plan_dft_c2r_2d(n, n, spec_buf, real_buf, FFTW_ESTIMATE);
        } else {
            fwd = fftw_plan_dft_r2c_3d(n, n, n, real_buf, spec_buf, FFTW_ESTIMATE);
            inv = fftw_plan_dft_c2r_3d(n, n, n, spec_buf, real_buf, FFTW_ESTIMATE);
        }
        if (!fwd || !inv) {
            throw ConfigError("spectral: FFTW plan creation failed");
        }
    }

    ~Fft() {
        if (fwd) fftw_destroy_plan(fwd);
        if (inv) fftw_destroy_plan(inv);
        if (real_buf) fftw_free(real_buf);
        if (spec_buf) fftw_free(spec_buf);
    }
};

SpectralNSModel::SpectralNSModel(const Config& config) : config_(config) {
    if (config_.spatial_dim != 2 && config_.spatial_dim != 3) {
        throw ConfigError("spectral: spatial dimension must be 2 or 3");
    }
    if (!power_of_two(config_.resolution)) {
        throw ConfigError("spectral: resolution must be a power of two (>= 4)");
    }
    if (config_.viscosity <= 0.0) {
        throw ConfigError("spectral: viscosity must be positive");
    }
    if (config_.length_scale <= 0.0) {
        throw ConfigError("spectral: length scale must be positive");
    }
    const Index r = config_.resolution;
    const int d = config_.spatial_dim;
    npts_ = 1;
    for (int a = 0; a < d; ++a) npts_ *= r;
    nspec_ = npts_ / r * (r / 2 + 1);

    // Signed mode number per axis; k = mode / L; 2/3-rule mask.
    const Index keep = r / 3;
    const double invl = 1.0 / config_.length_scale;
    ksq_ = Vector::Zero(nspec_);
    kvec_.assign(static_cast<size_t>(d), Vector::Zero(nspec_));
    mask_ = Eigen::ArrayXd::Zero(nspec_);
    auto signed_mode = [r](Index m) { return m <= r / 2 ? m : m - r; };
    const Index rh = r / 2 + 1;
    for (Index q = 0; q < nspec_; ++q) {
        Index modes[3] = {0, 0, 0};
        if (d == 2) {
            modes[0] = signed_mode(q / rh);
            modes[1] = q % rh;  // half axis, nonnegative
        } else {
            modes[0] = signed_mode(q / (r * rh));
            modes[1] = signed_mode((q / rh) % r);
            modes[2] = q % rh;
        }
        bool keep_mode = true;
        double ks = 0.0;
        for (int a = 0; a < d; ++a) {
            const double k = static_cast<double>(modes[a]) * invl;
            kvec_[static_cast<size_t>(a)](q) = k;
            ks += k * k;
            if (std::abs(modes[a]) > keep) keep_mode = false;
        }
        ksq_(q) = ks;
        mask_(q) = keep_mode ? 1.0 : 0.0;
    }
    fft_ = std::make_unique<Fft>(d, r);
}

SpectralNSModel::~SpectralNSModel() = default;

std::vector<StateBlock> SpectralNSModel::state_blocks() const {
    static const char* names[3] = {"vx", "vy", "vz"};
    std::vector<StateBlock> blocks;
    for (int c = 0; c < config_.spatial_dim; ++c) {
        blocks.push_back({names[c], static_cast<Index>(c) * npts_, npts_});
    }
    return blocks;
}

Index SpectralNSModel::grid_index(Index ix, Index iy, Index iz) const {
    const Index r = config_.resolution;
    auto w = [r](Index i) { return ((i % r) + r) % r; };
    if (config_.spatial_dim == 2) return w(ix) * r + w(iy);
    return (w(ix) * r + w(iy)) * r + w(iz);
}

double SpectralNSModel::coord(Index i) const {
    return 2.0 * std::numbers::pi * config_.length_scale * static_cast<double>(i) /
           static_cast<double>(config_.resolution);
}

SpectralNSModel::CArray SpectralNSModel::forward(const double* in) const {
    std::lock_guard<std::mutex> lock(fft_mutex_);
    std::memcpy(fft_->real_buf, in, sizeof(double) * static_cast<size_t>(npts_));
    fftw_execute(fft_->fwd);
    CArray out(nspec_);
    const double scale = 1.0 / static_cast<double>(npts_);
    for (Index q = 0; q < nspec_; ++q) {
        out(q) = Complex(fft_->spec_buf[q][0], fft_->spec_buf[q][1]) * scale;
    }
    return out;
}

void SpectralNSModel::inverse(const CArray& in, double* out) const {
    std::lock_guard<std::mutex> lock(fft_mutex_);
    for (Index q = 0; q < nspec_; ++q) {
        fft_->spec_buf[q][0] = in(q).real();
        fft_->spec_buf[q][1] = in(q).imag();
    }
    fftw_execute(fft_->inv);
    std::memcpy(out, fft_->real_buf, sizeof(double) * static_cast<size_t>(npts_));
}

void SpectralNSModel::dealias(CArray& a) const { a *= mask_; }

std::vector<SpectralNSModel::CArray> SpectralNSModel::to_coefficients(const Vector& u) const {
    check_length(u, "state");
    std::vector<CArray> hat;
    hat.reserve(static_cast<size_t>(config_.spatial_dim));
    for (int c = 0; c < config_.spatial_dim; ++c) {
        hat.push_back(forward(u.data() + static_cast<Index>(c) * npts_));
    }
    return hat;
}

Vector SpectralNSModel::from_coefficients(const std::vector<CArray>& vhat) const {
    Vector u(dim());
    for (int c = 0; c < config_.spatial_dim; ++c) {
        inverse(vhat[static_cast<size_t>(c)], u.data() + static_cast<Index>(c) * npts_);
    }
    return u;
}

std::vector<SpectralNSModel::CArray> SpectralNSModel::split_forward_dealias(
    const Vector& u) const {
    std::vector<CArray> hat = to_coefficients(u);
    for (auto& h : hat) dealias(h);
    return hat;
}

std::vector<SpectralNSModel::CArray> SpectralNSModel::curl(
    const std::vector<CArray>& vhat) const {
    const Complex im(0.0, 1.0);
    if (config_.spatial_dim == 2) {
        CArray wz(nspec_);
        for (Index q = 0; q < nspec_; ++q) {
            wz(q) = im * (kvec_[0](q) * vhat[1](q) - kvec_[1](q) * vhat[0](q));
        }
        return {wz};
    }
    CArray wx(nspec_), wy(nspec_), wz(nspec_);
    for (Index q = 0; q < nspec_; ++q) {
        wx(q) = im * (kvec_[1](q) * vhat[2](q) - kvec_[2](q) * vhat[1](q));
        wy(q) = im * (kvec_[2](q) * vhat[0](q) - kvec_[0](q) * vhat[2](q));
        wz(q) = im * (kvec_[0](q) * vhat[1](q) - kvec_[1](q) * vhat[0](q));
    }
    return {wx, wy, wz};
}

void SpectralNSModel::project(std::vector<CArray>& what) const {
    const int d = config_.spatial_dim;
    for (Index q = 0; q < nspec_; ++q) {
        if (ksq_(q) == 0.0) continue;
        Complex dot(0.0, 0.0);
        for (int a = 0; a < d; ++a) dot += kvec_[static_cast<size_t>(a)](q) * what[static_cast<size_t>(a)](q);
        dot /= ksq_(q);
        for (int a = 0; a < d; ++a) what[static_cast<size_t>(a)](q) -= kvec_[static_cast<size_t>(a)](q) * dot;
    }
}

std::vector<Vector> SpectralNSModel::components_physical(
    const std::vector<CArray>& hat) const {
    std::vector<Vector> phys(hat.size(), Vector(npts_));
    for (size_t c = 0; c < hat.size(); ++c) {
        inverse(hat[c], phys[c].data());
    }
    return phys;
}

std::vector<SpectralNSModel::CArray> SpectralNSModel::cross_bilinear(
    const std::vector<Vector>& aphys, const std::vector<CArray>& ahat,
    const std::vector<Vector>& bphys, const std::vector<CArray>& bhat) const {
    const int d = config_.spatial_dim;
    std::vector<Vector> wa = components_physical(curl(ahat));
    std::vector<Vector> wb = components_physical(curl(bhat));
    std::vector<Vector> s(static_cast<size_t>(d), Vector::Zero(npts_));
    if (d == 2) {
        // omega = w e_z:  v x omega = (vy w, -vx w)
        for (Index p = 0; p < npts_; ++p) {
            const double sab0 = aphys[1](p) * wb[0](p);
            const double sab1 = -aphys[0](p) * wb[0](p);
            const double sba0 = bphys[1](p) * wa[0](p);
            const double sba1 = -bphys[0](p) * wa[0](p);
            s[0](p) = 0.5 * (sab0 + sba0);
            s[1](p) = 0.5 * (sab1 + sba1);
        }
    } else {
        for (Index p = 0; p < npts_; ++p) {
            for (int a = 0; a < 3; ++a) {
                const int a1 = (a + 1) % 3;
                const int a2 = (a + 2) % 3;
                const double sab = aphys[static_cast<size_t>(a1)](p) * wb[static_cast<size_t>(a2)](p) -
                                   aphys[static_cast<size_t>(a2)](p) * wb[static_cast<size_t>(a1)](p);
                const double sba = bphys[static_cast<size_t>(a1)](p) * wa[static_cast<size_t>(a2)](p) -
                                   bphys[static_cast<size_t>(a2)](p) * wa[static_cast<size_t>(a1)](p);
                s[static_cast<size_t>(a)](p) = 0.5 * (sab + sba);
            }
        }
    }
    std::vector<CArray> shat;
    shat.reserve(static_cast<size_t>(d));
    for (int a = 0; a < d; ++a) {
        CArray h = forward(s[static_cast<size_t>(a)].data());
        dealias(h);
        shat.push_back(std::move(h));
    }
    project(shat);
    return shat;
}

std::vector<SpectralNSModel::CArray> SpectralNSModel::rhs_coefficients(
    const std::vector<CArray>& vhat_in) const {
    const int d = config_.spatial_dim;
    if (static_cast<int>(vhat_in.size()) != d) {
        throw ContractError("spectral: coefficient component count mismatch");
    }
    std::vector<CArray> vhat = vhat_in;
    for (auto& h : vhat) dealias(h);

    std::vector<CArray> out(static_cast<size_t>(d), CArray::Zero(nspec_));
    if (config_.include_nonlinear) {
        std::vector<Vector> vphys = components_physical(vhat);
        out = cross_bilinear(vphys, vhat, vphys, vhat);
    }
    // Viscous term, then one joint projection keeps the result exactly
    // divergence-free for any input.
    for (int a = 0; a < d; ++a) {
        out[static_cast<size_t>(a)] -= config_.viscosity * (ksq_.array() * vhat[static_cast<size_t>(a)]);
    }
    project(out);
    for (auto& h : out) {
        for (Index q = 0; q < nspec_; ++q) {
            if (!std::isfinite(h(q).real()) || !std::isfinite(h(q).imag())) {
                throw NumericalError("spectral: non-finite coefficient in rhs at mode " +
                                     std::to_string(q));
            }
        }
    }
    return out;
}

Vector SpectralNSModel::rhs(const Vector& u) const {
    return from_coefficients(rhs_coefficients(to_coefficients(u)));
}

Vector SpectralNSModel::f_eval(const Vector& u, const ParamPoint& mu) const {
    check_param(mu);
    return -rhs(u);
}

Vector SpectralNSModel::jacobian_apply(const Vector& u, const ParamPoint& mu,
                                       const Vector& x) const {
    check_param(mu);
    check_length(x, "direction");
    std::vector<CArray> vhat = split_forward_dealias(u);
    std::vector<CArray> xhat = split_forward_dealias(x);
    const int d = config_.spatial_dim;
    std::vector<CArray> out(static_cast<size_t>(d), CArray::Zero(nspec_));
    if (config_.include_nonlinear) {
        std::vector<Vector> vphys = components_physical(vhat);
        std::vector<Vector> xphys = components_physical(xhat);
        // d/du [H(u,u)] . x = 2 H(u, x)
        out = cross_bilinear(vphys, vhat, xphys, xhat);
        for (auto& h : out) h *= 2.0;
    }
    for (int a = 0; a < d; ++a) {
        out[static_cast<size_t>(a)] -= config_.viscosity * (ksq_.array() * xhat[static_cast<size_t>(a)]);
    }
    project(out);
    Vector jr = from_coefficients(out);
    return -jr;
}

Matrix SpectralNSModel::jacobian_apply_block(const Vector& u, const ParamPoint& mu,
                                             const Matrix& X) const {
    check_param(mu);
    check_length(u, "state");
    std::vector<CArray> vhat = split_forward_dealias(u);
    std::vector<Vector> vphys = components_physical(vhat);
    const int d = config_.spatial_dim;
    Matrix out(dim(), X.cols());
    for (Index j = 0; j < X.cols(); ++j) {
        Vector x = X.col(j);
        std::vector<CArray> xhat = split_forward_dealias(x);
        std::vector<CArray> acc(static_cast<size_t>(d), CArray::Zero(nspec_));
        if (config_.include_nonlinear) {
            std::vector<Vector> xphys = components_physical(xhat);
            acc = cross_bilinear(vphys, vhat, xphys, xhat);
            for (auto& h : acc) h *= 2.0;
        }
        for (int a = 0; a < d; ++a) {
            acc[static_cast<size_t>(a)] -= config_.viscosity * (ksq_.array() * xhat[static_cast<size_t>(a)]);
        }
        project(acc);
        out.col(j) = -from_coefficients(acc);
    }
    return out;
}

Vector SpectralNSModel::solve_shifted_jacobian(const Vector& u, const ParamPoint& mu,
                                               double c, const Vector& b) const {
    check_param(mu);
    check_length(u, "state");
    check_length(b, "rhs");
    if (c <= 0.0) {
        throw SolverError("spectral: stage shift must be positive for the splitting solver");
    }
    const int d = config_.spatial_dim;
    const double nu = config_.viscosity;
    std::vector<CArray> bhat = to_coefficients(b);
    std::vector<CArray> vhat = split_forward_dealias(u);
    std::vector<Vector> vphys = components_physical(vhat);

    // Solve (c I + nu k^2 P - 2 P H(u, .)) x = b per mode: the c + nu k^2 P
    // part inverts exactly (split along/perpendicular to k); the convective
    // part is swept by a fixed-point iteration that contracts because the
    // shift c = 1/(a_ii dt) dominates the convective spectral radius.
    auto diag_solve = [&](const std::vector<CArray>& y) {
        std::vector<CArray> x(static_cast<size_t>(d), CArray(nspec_));
        for (Index q = 0; q < nspec_; ++q) {
            if (mask_(q) == 0.0 || ksq_(q) == 0.0) {
                for (int a = 0; a < d; ++a) x[static_cast<size_t>(a)](q) = y[static_cast<size_t>(a)](q) / c;
                continue;
            }
            Complex dot(0.0, 0.0);
            for (int a = 0; a < d; ++a) dot += kvec_[static_cast<size_t>(a)](q) * y[static_cast<size_t>(a)](q);
            dot /= ksq_(q);
            const double dperp = c + nu * ksq_(q);
            for (int a = 0; a < d; ++a) {
                const Complex par = kvec_[static_cast<size_t>(a)](q) * dot;
                const Complex perp = y[static_cast<size_t>(a)](q) - par;
                x[static_cast<size_t>(a)](q) = perp / dperp + par / c;
            }
        }
        return x;
    };

    std::vector<CArray> x = diag_solve(bhat);
    if (config_.include_nonlinear) {
        const int max_sweeps = 100;
        double bnorm = 0.0;
        for (int a = 0; a < d; ++a) bnorm = std::max(bnorm, bhat[static_cast<size_t>(a)].abs().maxCoeff());
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            // y = b + 2 P H(u, x)   (the convective part moved to the rhs)
            std::vector<CArray> xd = x;
            for (auto& h : xd) dealias(h);
            std::vector<Vector> xphys = components_physical(xd);
            std::vector<CArray> nl = cross_bilinear(vphys, vhat, xphys, xd);
            std::vector<CArray> y(static_cast<size_t>(d));
            for (int a = 0; a < d; ++a) {
                y[static_cast<size_t>(a)] = bhat[static_cast<size_t>(a)] + 2.0 * nl[static_cast<size_t>(a)];
            }
            std::vector<CArray> xn = diag_solve(y);
            double delta = 0.0;
            for (int a = 0; a < d; ++a) {
                delta = std::max(delta, (xn[static_cast<size_t>(a)] - x[static_cast<size_t>(a)]).abs().maxCoeff());
            }
            x = std::move(xn);
            if (delta <= 1e-14 * (bnorm + 1e-300) || delta == 0.0) {
                return from_coefficients(x);
            }
        }
        throw SolverError("spectral: stage splitting iteration did not converge "
                          "(shift too small for this flow state)");
    }
    return from_coefficients(x);
}

Vector SpectralNSModel::taylor_green_initial() const {
    const Index r = config_.resolution;
    const double v0 = config_.velocity_scale;
    const double l = config_.length_scale;
    Vector u = Vector::Zero(dim());
    if (config_.spatial_dim == 2) {
        for (Index ix = 0; ix < r; ++ix) {
            const double x = coord(ix) / l;
            for (Index iy = 0; iy < r; ++iy) {
                const double y = coord(iy) / l;
                const Index p = grid_index(ix, iy);
                u(p) = v0 * std::sin(x) * std::cos(y);
                u(npts_ + p) = -v0 * std::cos(x) * std::sin(y);
            }
        }
        return u;
    }
    for (Index ix = 0; ix < r; ++ix) {
        const double x = coord(ix) / l;
        for (Index iy = 0; iy < r; ++iy) {
            const double y = coord(iy) / l;
            for (Index iz = 0; iz < r; ++iz) {
                const double z = coord(iz) / l;
                const Index p = grid_index(ix, iy, iz);
                u(p) = v0 * std::sin(x) * std::cos(y) * std::cos(z);
                u(npts_ + p) = -v0 * std::cos(x) * std::sin(y) * std::cos(z);
            }
        }
    }
    return u;
}

double SpectralNSModel::kinetic_energy(const Vector& u) const {
    check_length(u, "state");
    double acc = 0.0;
    for (Index i = 0; i < u.size(); ++i) acc += u(i) * u(i);
    return 0.5 * acc / static_cast<double>(npts_);
}

double SpectralNSModel::enstrophy_dissipation(const Vector& u) const {
    std::vector<CArray> vhat = to_coefficients(u);
    std::vector<Vector> w = components_physical(curl(vhat));
    double acc = 0.0;
    for (const Vector& wc : w) acc += wc.squaredNorm();
    return config_.viscosity * acc / static_cast<double>(npts_);
}

double SpectralNSModel::max_divergence(const Vector& u) const {
    std::vector<CArray> vhat = to_coefficients(u);
    const int d = config_.spatial_dim;
    double worst = 0.0;
    for (Index q = 0; q < nspec_; ++q) {
        Complex dot(0.0, 0.0);
        for (int a = 0; a < d; ++a) dot += kvec_[static_cast<size_t>(a)](q) * vhat[static_cast<size_t>(a)](q);
        worst = std::max(worst, std::abs(dot));
    }
    return worst;
}

Vector SpectralNSModel::project_divergence_free(const Vector& u) const {
    std::vector<CArray> vhat = to_coefficients(u);
    project(vhat);
    return from_coefficients(vhat);
}

Vector SpectralNSModel::random_solenoidal(double rms_speed, int max_mode,
                                          std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector raw(dim());
    for (Index i = 0; i < raw.size(); ++i) raw(i) = normal(rng);
    std::vector<CArray> hat = to_coefficients(raw);
    const Index keep = std::min<Index>(max_mode, config_.resolution / 3);
    for (auto& h : hat) {
        for (Index q = 0; q < nspec_; ++q) {
            if (ksq_(q) == 0.0) {
                h(q) = 0.0;  // no mean flow
                continue;
            }
            bool inside = mask_(q) != 0.0;
            const int d = config_.spatial_dim;
            for (int a = 0; a < d && inside; ++a) {
                inside = std::abs(kvec_[static_cast<size_t>(a)](q)) * config_.length_scale <=
                         static_cast<double>(keep) + 0.5;
            }
            h(q) = inside ? h(q) / ksq_(q) : Complex(0.0, 0.0);
        }
    }
    project(hat);
    Vector field = from_coefficients(hat);
    const double rms = std::sqrt(2.0 * kinetic_energy(field));
    if (rms == 0.0) {
        throw NumericalError("spectral: random solenoidal field degenerated to zero");
    }
    return field * (rms_speed / rms);
}

Vector SpectralNSModel::constant_term(const ParamPoint& mu) const {
    check_param(mu);
    return Vector::Zero(dim());
}

Vector SpectralNSModel::linear_apply(const Vector& x, const ParamPoint& mu) const {
    check_param(mu);
    check_length(x, "linear_apply input");
    std::vector<CArray> xhat = split_forward_dealias(x);
    const int d = config_.spatial_dim;
    std::vector<CArray> out(static_cast<size_t>(d));
    for (int a = 0; a < d; ++a) {
        out[static_cast<size_t>(a)] = config_.viscosity * (ksq_.array() * xhat[static_cast<size_t>(a)]);
    }
    project(out);
    return from_coefficients(out);
}

Vector SpectralNSModel::bilinear_apply(const Vector& x, const Vector& y,
                                       const ParamPoint& mu) const {
    check_param(mu);
    check_length(x, "bilinear_apply x");
    check_length(y, "bilinear_apply y");
    if (!config_.include_nonlinear) {
        return Vector::Zero(dim());
    }
    std::vector<CArray> xhat = split_forward_dealias(x);
    std::vector<CArray> yhat = split_forward_dealias(y);
    std::vector<Vector> xphys = components_physical(xhat);
    std::vector<Vector> yphys = components_physical(yhat);
    std::vector<CArray> s = cross_bilinear(xphys, xhat, yphys, yhat);
    return -from_coefficients(s);
}

}  // namespace prom
