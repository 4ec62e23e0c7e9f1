#include "glelab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "glelab/errors.hpp"

namespace glelab {

namespace {

bool is_spd(const Matrix& a) {
    if (a.rows() != a.cols() || !a.allFinite()) return false;
    if (max_abs(a - a.transpose()) > 1e-12 * std::max(1.0, max_abs(a))) return false;
    Eigen::LLT<Matrix> llt(a);
    return llt.info() == Eigen::Success;
}

void expect_shape(const Matrix& a, Eigen::Index rows, Eigen::Index cols, const char* name) {
    if (a.rows() != rows || a.cols() != cols) {
        throw DimensionError(std::string(name) + ": expected " + std::to_string(rows) + "x" +
                             std::to_string(cols) + ", got " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()));
    }
    if (!a.allFinite()) throw ValidationError(std::string(name) + ": non-finite entries");
}

bool is_diagonal(const Matrix& a) {
    Matrix off = a;
    off.diagonal().setZero();
    return max_abs(off) == 0.0;
}

// Orthonormal basis of the column space of a, dropping directions whose
// singular value is below rel_tol·σ_max (or below abs_floor).
Matrix column_basis(const Matrix& a, double rel_tol, double abs_floor) {
    if (a.cols() == 0) return Matrix(a.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
    const Vector& sv = svd.singularValues();
    const double cutoff = std::max(abs_floor, rel_tol * (sv.size() ? sv(0) : 0.0));
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    return svd.matrixU().leftCols(rank);
}

// Dimension of the smallest Γ_M-invariant subspace containing range(Σ).
Eigen::Index controllable_dimension(const Matrix& gm, const Matrix& sigma) {
    const Eigen::Index dim = gm.rows();
    const double scale = std::max(1.0, max_abs(sigma));
    Matrix basis = column_basis(sigma, 1e-10, 1e-14 * scale);
    Matrix frontier = basis;
    while (basis.cols() < dim && frontier.cols() > 0) {
        Matrix next = gm * frontier;
        for (Eigen::Index j = 0; j < next.cols(); ++j) {
            const double norm = next.col(j).norm();
            if (norm > 0.0) next.col(j) /= norm;
        }
        for (int pass = 0; pass < 2; ++pass) next -= basis * (basis.transpose() * next);
        frontier = column_basis(next, 1e-10, 1e-10);
        Matrix grown(dim, basis.cols() + frontier.cols());
        grown << basis, frontier;
        basis = grown;
    }
    return basis.cols();
}

}  // namespace

GleParams::GleParams(Matrix mass, Matrix gamma11, Matrix gamma12, Matrix gamma21,
                     Matrix gamma22, Matrix q_aux, double beta)
    : mass_(std::move(mass)),
      gamma11_(std::move(gamma11)),
      gamma12_(std::move(gamma12)),
      gamma21_(std::move(gamma21)),
      gamma22_(std::move(gamma22)),
      q_aux_(std::move(q_aux)),
      beta_(beta) {
    const Eigen::Index n = mass_.rows();
    const Eigen::Index m = q_aux_.rows();
    if (n < 1) throw DimensionError("mass: position dimension must be at least 1");
    if (m < 1) throw DimensionError("q: auxiliary dimension must be at least 1");
    expect_shape(mass_, n, n, "mass");
    expect_shape(q_aux_, m, m, "q");
    expect_shape(gamma11_, n, n, "gamma11");
    expect_shape(gamma12_, n, m, "gamma12");
    expect_shape(gamma21_, m, n, "gamma21");
    expect_shape(gamma22_, m, m, "gamma22");
    if (!(beta_ > 0.0) || !std::isfinite(beta_)) {
        throw ValidationError("beta: must be a positive finite number");
    }
    if (!is_spd(mass_)) throw ValidationError("mass: not symmetric positive definite");
    if (!is_spd(q_aux_)) throw ValidationError("q: not symmetric positive definite");
    mass_inv_ = mass_.llt().solve(Matrix::Identity(n, n));
    mass_inv_ = 0.5 * (mass_inv_ + mass_inv_.transpose());
}

Matrix GleParams::gamma() const {
    const int nn = n();
    const int mm = m();
    Matrix g(nn + mm, nn + mm);
    g.topLeftCorner(nn, nn) = gamma11_;
    g.topRightCorner(nn, mm) = gamma12_;
    g.bottomLeftCorner(mm, nn) = gamma21_;
    g.bottomRightCorner(mm, mm) = gamma22_;
    return g;
}

Matrix GleParams::gamma_m() const {
    Matrix g = gamma();
    g.leftCols(n()) = g.leftCols(n()) * mass_inv_;
    return g;
}

Matrix GleParams::z_covariance() const {
    Matrix d = Matrix::Zero(dim_z(), dim_z());
    d.topLeftCorner(n(), n()) = mass_;
    d.bottomRightCorner(m(), m()) = q_aux_;
    return d / beta_;
}

GleParams from_prony(const std::vector<PronyTerm>& terms, int n, const Matrix& mass,
                     double beta) {
    if (terms.empty()) throw ValidationError("prony: at least one term is required");
    if (n < 1) throw DimensionError("prony: n must be at least 1");
    int block = 0;
    for (const auto& t : terms) {
        if (!(t.c > 0.0) || !(t.a > 0.0) || !(t.b >= 0.0) || !std::isfinite(t.c) ||
            !std::isfinite(t.a) || !std::isfinite(t.b)) {
            throw ValidationError("prony: terms need c > 0, a > 0, b >= 0");
        }
        block += t.b == 0.0 ? 1 : 2;
    }
    const int m = n * block;
    Matrix g12 = Matrix::Zero(n, m);
    Matrix g22 = Matrix::Zero(m, m);
    for (int i = 0; i < n; ++i) {
        int col = i * block;
        for (const auto& t : terms) {
            g12(i, col) = std::sqrt(t.c);
            if (t.b == 0.0) {
                g22(col, col) = t.a;
                col += 1;
            } else {
                g22(col, col) = t.a;
                g22(col + 1, col + 1) = t.a;
                g22(col, col + 1) = t.b;
                g22(col + 1, col) = -t.b;
                col += 2;
            }
        }
    }
    Matrix g21 = -g12.transpose();
    return GleParams(mass, Matrix::Zero(n, n), g12, g21, g22, Matrix::Identity(m, m), beta);
}

GleParams from_exp_kernel(const ExpKernelSpec& spec, int n, const Matrix& mass, double beta) {
    if (!(spec.gamma > 0.0) || !(spec.tau > 0.0)) {
        throw ValidationError("exp kernel: gamma and tau must be positive");
    }
    if (!(spec.lambda >= 0.0 && spec.lambda < 1.0)) {
        throw ValidationError("exp kernel: lambda must lie in [0, 1)");
    }
    const Matrix eye = Matrix::Identity(n, n);
    if (spec.lambda == 0.0) {
        const double c = std::sqrt(spec.gamma);
        return GleParams(mass, Matrix::Zero(n, n), c * eye, -c * eye, eye / spec.tau, eye, beta);
    }
    const double c = std::sqrt(spec.lambda * spec.gamma / spec.tau);
    return GleParams(mass, spec.gamma * eye, c * eye, c * eye, eye / spec.tau, eye, beta);
}

GleParams from_rescale_spec(const RescaleSpec& spec, double beta) {
    const Eigen::Index n = spec.d_a.size();
    if (n < 1 || spec.d_b.size() != n) {
        throw DimensionError("rescale spec: d_a and d_b must have the same non-zero length");
    }
    if ((spec.d_a.array() <= 0.0).any() || (spec.d_b.array() <= 0.0).any() ||
        !(spec.mu1 > 0.0) || !(spec.mu2 > 0.0)) {
        throw ValidationError("rescale spec: mu1, mu2, d_a, d_b must be positive");
    }
    const Matrix da = spec.d_a.asDiagonal();
    const Matrix db = spec.d_b.asDiagonal();
    const Matrix eye = Matrix::Identity(n, n);
    return GleParams(eye, Matrix::Zero(n, n), -spec.mu1 * da, spec.mu1 * da, spec.mu2 * db, eye,
                     beta);
}

KernelValue kernel_eval(const GleParams& params, double t) {
    if (!(t >= 0.0)) throw DomainError("kernel_eval: t must be non-negative");
    KernelValue out;
    out.markovian = params.gamma11();
    out.smooth = -params.gamma12() * expm(-t * params.gamma22()) * params.gamma21();
    return out;
}

ValidationReport validate(const GleParams& params) {
    ValidationReport report;
    const Matrix gm = params.gamma_m();
    Eigen::EigenSolver<Matrix> eig(gm, false);
    report.min_real_eigenvalue = eig.eigenvalues().real().minCoeff();
    report.stable = report.min_real_eigenvalue > 0.0;
    report.commutation_residual =
        max_abs(params.gamma11() * params.mass() - params.mass() * params.gamma11());

    const int n = params.n();
    const int m = params.m();
    Matrix d = Matrix::Zero(n + m, n + m);
    d.topLeftCorner(n, n).setIdentity();
    d.bottomRightCorner(m, m) = params.q_aux();
    const Matrix g = params.gamma();
    Matrix noise = g * d + d * g.transpose();
    noise = 0.5 * (noise + noise.transpose());
    try {
        const Matrix sigma = psd_factor(noise, 1e-10 * std::max(1.0, max_abs(noise)));
        report.fdt_residual = max_abs(noise - sigma * sigma.transpose());
        report.controllable = controllable_dimension(gm, sigma) == n + m;
        try {
            report.fdt_q = solve_continuous_lyapunov(params.gamma22(),
                                                     noise.bottomRightCorner(m, m));
        } catch (const NumericalError&) {
        }
    } catch (const NumericalError&) {
        report.controllable = false;
    }
    return report;
}

GleParams rescale(const GleParams& params, double mu1, double mu2) {
    if (!(mu1 > 0.0) || !(mu2 > 0.0)) throw ValidationError("rescale: mu1, mu2 must be positive");
    const int n = params.n();
    const Matrix eye = Matrix::Identity(n, n);
    const bool diagonal_class =
        params.m() == n && max_abs(params.gamma11()) == 0.0 && is_diagonal(params.gamma12()) &&
        max_abs(params.gamma21() + params.gamma12()) == 0.0 && is_diagonal(params.gamma22()) &&
        (params.gamma22().diagonal().array() > 0.0).all() && max_abs(params.mass() - eye) == 0.0 &&
        max_abs(params.q_aux() - eye) == 0.0;
    if (!diagonal_class) {
        throw UnsupportedError("rescale: parameters are not in the diagonal rescaling class");
    }
    return GleParams(params.mass(), params.gamma11(), mu1 * params.gamma12(),
                     mu1 * params.gamma21(), mu2 * params.gamma22(), params.q_aux(),
                     params.beta());
}

GleParams builtin_kv_8_8(int n, double beta) {
    if (n < 1) throw DimensionError("kv_8_8: n must be at least 1");
    constexpr double g11 = 1.336001e+1;
    const double g12[8] = {8.327012e-6,  1.850437e-4, 2.551111e-3, -1.63314e-2,
                           -1.334317e-1, 1.679873e+0, 2.22050e+1,  6.274743e+0};
    const double g21[8] = {1.20137e-5,   1.83376e-4, 2.505216e-3, -1.625490e-2,
                           -1.334317e-1, 1.68179e+0, 2.22086e+1,  6.09239e+0};
    const double g22[8][8] = {
        {3.25571e-6, 7.47982e-6, 9.622039e-6, 4.244713e-5, 1.695553e-5, 3.285529e-5,
         6.747855e-6, -1.438594e-4},
        {-7.479820e-6, 1.019983e-4, 1.424663e-5, -1.396013e-5, 1.513710e-5, -1.200000e-5,
         2.54657e-5, -6.346355e-5},
        {-9.622039e-6, -1.424663e-5, 2.206513e-3, 2.2645018e-5, 1.384732e-5, 4.388201e-5,
         -4.079418e-6, 8.9663528e-3},
        {-4.244713e-5, 1.396013e-5, -2.26450e-5, 2.218067e-2, 1.249881e-5, 2.492691e-5,
         1.116974336243e-5, 3.14859310e-3},
        {-1.6955539e-5, -1.513710e-5, -1.3847329e-5, -1.249881e-5, 1.772222e-1, 3.888513e-5,
         -4.4198267e-6, 1.010943e-1},
        {-3.285529e-5, 1.200000e-5, -4.388201e-5, -2.492691e-5, -3.888513e-5, 2.79177e+0,
         8.375329164851e-6, 2.17612e-1},
        {-6.74785e-6, -2.54657e-5, 4.07941e-6, -1.116974e-5, 4.419826e-6, -8.37532e-6,
         4.043272e+1, 3.460867415178e-2},
        {1.438594e-4, 6.346355e-5, -8.966352e-3, -3.14859e-3, -1.010943e-1, -2.176129826302e-1,
         -3.46086e-2, 1.088614e+3}};
    const int m = 8 * n;
    Matrix gamma12 = Matrix::Zero(n, m);
    Matrix gamma21 = Matrix::Zero(m, n);
    Matrix gamma22 = Matrix::Zero(m, m);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < 8; ++k) {
            gamma12(i, 8 * i + k) = g12[k];
            gamma21(8 * i + k, i) = g21[k];
            for (int l = 0; l < 8; ++l) gamma22(8 * i + k, 8 * i + l) = g22[k][l];
        }
    }
    const Matrix eye = Matrix::Identity(n, n);
    return GleParams(eye, g11 * eye, gamma12, gamma21, gamma22, Matrix::Identity(m, m), beta);
}

std::vector<PronyTerm> benchmark_prony_terms(int r) {
    const double scale = std::ldexp(1.0, r);
    return {{scale * 2.5, scale / 4.0, 0.0}, {scale * 0.5, scale / 8.0, 0.0}};
}

}  // namespace glelab
