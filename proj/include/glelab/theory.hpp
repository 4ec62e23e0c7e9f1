#pragma once

#include "glelab/integrators.hpp"
#include "glelab/kernel.hpp"

namespace glelab {

// One step of a scheme on U(q) = ½qᵀΩq is x ← E x + ξ with ξ ∼ N(0, C).
// State layout: palindromes, ASA, SAS and BB schemes use (q, p, s);
// LD-BAOAB uses (q, p); BAOAB-LIMIT uses (q, R) with R the cached draw.
struct LinearStepMatrices {
    Matrix mean_map;
    Matrix noise_cov;
};

struct CovarianceResult {
    Vector mean;
    Matrix cov;
};

LinearStepMatrices linear_step(const SchemeSpec& scheme, const Matrix& omega,
                               const GleParams& params, double h,
                               const BaselineSpec* baseline = nullptr);

// Closed-form invariant Gaussians for BAOAB/ABOBA and OBABO/OABAO:
// β⁻¹diag(Ω⁻¹, (1−h²/4)M, Q) and β⁻¹diag((1−h²/4)Ω⁻¹, M, Q).
CovarianceResult analytic_invariant_cov(const SchemeSpec& scheme, const Matrix& omega,
                                        const GleParams& params, double h);

CovarianceResult numeric_stationary_cov(const SchemeSpec& scheme, const Matrix& omega,
                                        const GleParams& params, double h,
                                        const BaselineSpec* baseline = nullptr);

double chain_spectral_radius(const SchemeSpec& scheme, const Matrix& omega,
                             const GleParams& params, double h,
                             const BaselineSpec* baseline = nullptr);

// Smallest h in (0, h_max] at which the chain's spectral radius reaches
// 1 − 1e−9; returns h_max when the chain stays stable up to it.
double stability_threshold(const SchemeSpec& scheme, const Matrix& omega,
                           const GleParams& params, double h_max,
                           const BaselineSpec* baseline = nullptr);

enum class LimitMode { WhiteNoise, Overdamped };

// White noise (μ = (ε⁻¹, ε⁻²)): ‖expm(−hΓ^μ) − diag(expm(−hD_a²D_b⁻¹), 0)‖_max.
// Overdamped (μ = (ε⁻¹, ε⁻¹)): ‖expm(−hΓ^μ)‖_max.
double limit_gap(const RescaleSpec& spec, LimitMode mode, double eps, double h);

}  // namespace glelab
