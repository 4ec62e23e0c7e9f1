#pragma once

#include <Eigen/Dense>

namespace glelab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Matrix exponential by scaling and squaring with a diagonal Padé
/// approximant (degree 3..13 chosen from the 1-norm).
Matrix expm(const Matrix& a);

/// Lower-triangular L with L Lᵀ = m.
///
/// Tries Cholesky first; when that fails (m singular or numerically
/// indefinite) falls back to a symmetric eigendecomposition, clips
/// eigenvalues in [-tol, 0) to zero and re-triangularises with QR.
/// Throws NotPsdError if an eigenvalue is below -tol.
Matrix psd_factor(const Matrix& m, double tol = 1e-12);

/// Symmetric V with V = e V eᵀ + c, via the Kronecker-vectorised system.
/// Throws InstabilityError when the spectral radius of e is >= 1 - tol.
Matrix solve_discrete_lyapunov(const Matrix& e, const Matrix& c, double tol = 1e-12);

/// X with a X + X aᵀ = c, via the Kronecker-vectorised system.
/// Throws NumericalError when the system has no unique solution.
Matrix solve_continuous_lyapunov(const Matrix& a, const Matrix& c);

double spectral_radius(const Matrix& a);
double max_abs(const Matrix& a);
bool all_finite(const Matrix& a);

/// Symmetric positive-definite square root.
Matrix spd_sqrt(const Matrix& a);

}  // namespace glelab
