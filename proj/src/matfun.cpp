#include "glelab/matfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

#include "glelab/errors.hpp"

namespace glelab {

namespace {

// Kronecker-vectorised solves are used up to this size (N² unknowns); above
// it the complex-Schur (Bartels–Stewart) recurrences take over.
constexpr Eigen::Index kKroneckerLimit = 40;

using CMatrix = Eigen::MatrixXcd;

void require_square(const Matrix& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

// Padé coefficients b_0..b_m and the 1-norm thresholds from Higham (2005).
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                           302702400.0,   30270240.0,   2162160.0,
                                           110880.0,      3960.0,       90.0,
                                           1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
Matrix pade_low(const Matrix& a, const std::array<double, N>& b) {
    const Eigen::Index n = a.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    Matrix u_inner = b[1] * ident;
    Matrix v = b[0] * ident;
    Matrix power = ident;
    for (std::size_t k = 2; k < N; k += 2) {
        power = power * a2;
        v += b[k] * power;
        u_inner += b[k + 1] * power;
    }
    const Matrix u = a * u_inner;
    return (v - u).partialPivLu().solve(v + u);
}

Matrix pade13(const Matrix& a) {
    const auto& b = kPade13;
    const Eigen::Index n = a.rows();
    const Matrix ident = Matrix::Identity(n, n);
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                          b[3] * a2 + b[1] * ident);
    const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                     b[2] * a2 + b[0] * ident;
    return (v - u).partialPivLu().solve(v + u);
}

double one_norm(const Matrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

Eigen::VectorXcd eigenvalues(const Matrix& a) {
    Eigen::EigenSolver<Matrix> solver(a, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigenvalue computation did not converge");
    }
    return solver.eigenvalues();
}

// Stein equation V = E V Eᵀ + C through the complex Schur form E = U T U*.
Matrix stein_schur(const Matrix& e, const Matrix& c) {
    Eigen::ComplexSchur<Matrix> schur(e);
    const CMatrix& t = schur.matrixT();
    const CMatrix& u = schur.matrixU();
    const Eigen::Index n = e.rows();
    const CMatrix ct = u.adjoint() * c.cast<std::complex<double>>() * u;
    CMatrix y = CMatrix::Zero(n, n);
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(n);
        for (Eigen::Index k = j + 1; k < n; ++k) acc += std::conj(t(j, k)) * y.col(k);
        const Eigen::VectorXcd rhs = ct.col(j) + t * acc;
        const CMatrix lhs = CMatrix::Identity(n, n) - std::conj(t(j, j)) * t;
        y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
    }
    return (u * y * u.adjoint()).real();
}

// Continuous Lyapunov a X + X aᵀ = c through the complex Schur form of a.
Matrix lyap_schur(const Matrix& a, const Matrix& c) {
    Eigen::ComplexSchur<Matrix> schur(a);
    const CMatrix& t = schur.matrixT();
    const CMatrix& u = schur.matrixU();
    const Eigen::Index n = a.rows();
    const CMatrix ct = u.adjoint() * c.cast<std::complex<double>>() * u;
    CMatrix y = CMatrix::Zero(n, n);
    const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        Eigen::VectorXcd rhs = ct.col(j);
        for (Eigen::Index k = j + 1; k < n; ++k) rhs -= std::conj(t(j, k)) * y.col(k);
        CMatrix lhs = t;
        lhs.diagonal().array() += std::conj(t(j, j));
        if (lhs.diagonal().cwiseAbs().minCoeff() <= 1e-13 * scale) {
            throw NumericalError("continuous Lyapunov equation has no unique solution "
                                 "(a and -aᵀ share an eigenvalue)");
        }
        y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
    }
    return (u * y * u.adjoint()).real();
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix unvec(const Vector& v, Eigen::Index n) {
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

}  // namespace

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool all_finite(const Matrix& a) { return a.allFinite(); }

double spectral_radius(const Matrix& a) {
    require_square(a, "spectral_radius");
    return eigenvalues(a).cwiseAbs().maxCoeff();
}

Matrix expm(const Matrix& a) {
    require_square(a, "expm");
    if (!a.allFinite()) throw DomainError("expm: non-finite input");
    const double norm = one_norm(a);
    if (norm <= kTheta3) return pade_low(a, kPade3);
    if (norm <= kTheta5) return pade_low(a, kPade5);
    if (norm <= kTheta7) return pade_low(a, kPade7);
    if (norm <= kTheta9) return pade_low(a, kPade9);
    const int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    Matrix result = pade13(a / std::ldexp(1.0, squarings));
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

Matrix psd_factor(const Matrix& m, double tol) {
    require_square(m, "psd_factor");
    if (!m.allFinite()) throw DomainError("psd_factor: non-finite input");
    const double asym = max_abs(m - m.transpose());
    if (asym > tol * std::max(1.0, max_abs(m))) {
        throw ValidationError("psd_factor: matrix is not symmetric (max asymmetry " +
                              std::to_string(asym) + ")");
    }
    const Matrix sym = 0.5 * (m + m.transpose());

    Eigen::LLT<Matrix> llt(sym);
    if (llt.info() == Eigen::Success) {
        Matrix l = llt.matrixL();
        if (l.allFinite() && max_abs(l * l.transpose() - sym) <= tol) return l;
    }

    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    if (eig.info() != Eigen::Success) throw NumericalError("psd_factor: eigensolver failed");
    Vector values = eig.eigenvalues();
    const double smallest = values.minCoeff();
    if (smallest < -tol) {
        throw NotPsdError(smallest, "psd_factor: matrix is not positive semi-definite "
                                    "(eigenvalue " + std::to_string(smallest) + ")");
    }
    values = values.cwiseMax(0.0);
    const Matrix root = eig.eigenvectors() * values.cwiseSqrt().asDiagonal();
    // root rootᵀ = m; QR of rootᵀ = Q R gives m = Rᵀ R with Rᵀ lower triangular.
    Eigen::HouseholderQR<Matrix> qr(root.transpose());
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        if (r(i, i) < 0.0) r.row(i) *= -1.0;
    }
    return r.transpose();
}

Matrix solve_discrete_lyapunov(const Matrix& e, const Matrix& c, double tol) {
    require_square(e, "solve_discrete_lyapunov");
    if (c.rows() != e.rows() || c.cols() != e.cols()) {
        throw DimensionError("solve_discrete_lyapunov: c must match e");
    }
    const double rho = spectral_radius(e);
    if (rho >= 1.0 - tol) {
        throw InstabilityError(rho, "solve_discrete_lyapunov: spectral radius " +
                                        std::to_string(rho) + " >= 1");
    }
    const Eigen::Index n = e.rows();
    Matrix v;
    if (n <= kKroneckerLimit) {
        const Matrix system = Matrix::Identity(n * n, n * n) - kron(e, e);
        const Vector rhs = Eigen::Map<const Vector>(c.data(), n * n);
        v = unvec(system.partialPivLu().solve(rhs), n);
    } else {
        v = stein_schur(e, c);
    }
    return 0.5 * (v + v.transpose());
}

Matrix solve_continuous_lyapunov(const Matrix& a, const Matrix& c) {
    require_square(a, "solve_continuous_lyapunov");
    if (c.rows() != a.rows() || c.cols() != a.cols()) {
        throw DimensionError("solve_continuous_lyapunov: c must match a");
    }
    const Eigen::Index n = a.rows();
    if (n > kKroneckerLimit) return lyap_schur(a, c);
    const Matrix ident = Matrix::Identity(n, n);
    const Matrix system = kron(ident, a) + kron(a, ident);
    Eigen::FullPivLU<Matrix> lu(system);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) {
        throw NumericalError("continuous Lyapunov equation has no unique solution "
                             "(a and -aᵀ share an eigenvalue)");
    }
    const Vector rhs = Eigen::Map<const Vector>(c.data(), n * n);
    return unvec(lu.solve(rhs), n);
}

Matrix spd_sqrt(const Matrix& a) {
    require_square(a, "spd_sqrt");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.transpose()));
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
        throw ValidationError("spd_sqrt: matrix is not symmetric positive definite");
    }
    return eig.operatorSqrt();
}

}  // namespace glelab
