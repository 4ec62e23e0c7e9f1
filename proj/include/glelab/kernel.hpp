#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "glelab/matfun.hpp"

namespace glelab {

// Extended-variable parameterisation of a quasi-Markovian GLE. Immutable once
// constructed; the constructor checks shapes, SPD-ness of M and Q, finiteness
// and β > 0. Stability and commutation are reported by validate().
class GleParams {
public:
    GleParams(Matrix mass, Matrix gamma11, Matrix gamma12, Matrix gamma21, Matrix gamma22,
              Matrix q_aux, double beta);

    int n() const { return static_cast<int>(mass_.rows()); }
    int m() const { return static_cast<int>(q_aux_.rows()); }
    int dim_z() const { return n() + m(); }

    const Matrix& mass() const { return mass_; }
    const Matrix& mass_inv() const { return mass_inv_; }
    const Matrix& gamma11() const { return gamma11_; }
    const Matrix& gamma12() const { return gamma12_; }
    const Matrix& gamma21() const { return gamma21_; }
    const Matrix& gamma22() const { return gamma22_; }
    const Matrix& q_aux() const { return q_aux_; }
    double beta() const { return beta_; }

    // Full (n+m)×(n+m) friction matrix Γ.
    Matrix gamma() const;
    // Γ_M = Γ·diag(M⁻¹, I).
    Matrix gamma_m() const;
    // β⁻¹·diag(M, Q), the stationary covariance of z = (p, s).
    Matrix z_covariance() const;

private:
    Matrix mass_, mass_inv_, gamma11_, gamma12_, gamma21_, gamma22_, q_aux_;
    double beta_;
};

struct PronyTerm {
    double c = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct ExpKernelSpec {
    double gamma = 0.0;
    double tau = 0.0;
    double lambda = 0.0;
};

// Diagonal rescaling class with M = Q = I:
// Γ = [[0, −μ₁D_a], [μ₁D_a, μ₂D_b]].
struct RescaleSpec {
    double mu1 = 1.0;
    double mu2 = 1.0;
    Vector d_a;
    Vector d_b;
};

struct ValidationReport {
    bool stable = false;
    double min_real_eigenvalue = 0.0;
    std::optional<Matrix> fdt_q;
    std::optional<double> fdt_residual;
    bool controllable = false;
    double commutation_residual = 0.0;
};

struct KernelValue {
    Matrix markovian;
    Matrix smooth;
};

GleParams from_prony(const std::vector<PronyTerm>& terms, int n, const Matrix& mass, double beta);
GleParams from_exp_kernel(const ExpKernelSpec& spec, int n, const Matrix& mass, double beta);
GleParams from_rescale_spec(const RescaleSpec& spec, double beta);

KernelValue kernel_eval(const GleParams& params, double t);

ValidationReport validate(const GleParams& params);

// Rescales a diagonal-class parameter set: Γ₁,₂ and Γ₂,₁ by μ₁, Γ₂,₂ by μ₂.
GleParams rescale(const GleParams& params, double mu1, double mu2);

GleParams builtin_kv_8_8(int n, double beta);

// Memory kernels of the double-well benchmark: K(t) = 2^r·K₀(2^r t) with
// K₀(t) = 5/2·e^{−t/4} + 1/2·e^{−t/8}.
std::vector<PronyTerm> benchmark_prony_terms(int r);

GleParams parse_kernel(std::istream& in);
void write_kernel(std::ostream& out, const GleParams& params);
GleParams load_kernel_file(const std::string& path);
void save_kernel_file(const GleParams& params, const std::string& path);

}  // namespace glelab
