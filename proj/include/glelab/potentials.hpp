#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glelab/matfun.hpp"

namespace glelab {

// Energy/gradient pair. The gradient writes into a caller-owned vector so the
// integrator inner loops stay allocation-free.
class Potential {
public:
    using EnergyFn = std::function<double(const Vector&)>;
    using GradientFn = std::function<void(const Vector&, Vector&)>;

    Potential(std::string name, int dim, EnergyFn energy, GradientFn gradient);

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    double energy(const Vector& q) const { return energy_(q); }
    void gradient(const Vector& q, Vector& out) const { gradient_(q, out); }
    Vector gradient(const Vector& q) const;

    // Ω for a purely quadratic potential, used by the linear-chain oracles.
    const std::optional<Matrix>& quadratic() const { return quadratic_; }
    void set_quadratic(Matrix omega) { quadratic_ = std::move(omega); }

private:
    std::string name_;
    int dim_;
    EnergyFn energy_;
    GradientFn gradient_;
    std::optional<Matrix> quadratic_;
};

// Largest relative deviation between the analytic gradient and central
// differences of the energy (step h) at the given points.
double gradient_check(const Potential& potential, const std::vector<Vector>& points,
                      double h = 1e-5);

Potential harmonic(const Matrix& omega);
Potential double_well();

struct MixtureHyper {
    double m = 0.0;
    double kappa = 0.0;
    double alpha = 2.0;
    double g = 0.2;
    double h = 0.0;
};

struct MixtureModelSpec {
    std::vector<double> data;
    int n_components = 3;
    MixtureHyper hyper;
};

// Hyperparameters derived from the data: m = mean, κ = 4/R², α = 2, g = 0.2,
// h = 100g/(αR²) with R the data range.
MixtureModelSpec make_mixture_spec(std::vector<double> data, int n_components = 3);

// Unconstrained coordinates of the mixture posterior, K = n_components:
// [z (K−1 isometric log-ratio weight coordinates), μ (K), log λ (K), log β].
struct MixturePoint {
    Vector weights;
    Vector means;
    Vector precisions;
    double beta = 0.0;
};
int mixture_dim(int n_components);
MixturePoint mixture_unpack(const Vector& q, int n_components);
Vector mixture_pack(const MixturePoint& point);
std::vector<std::string> mixture_param_names(int n_components);

Potential mixture_posterior(const MixtureModelSpec& spec);

// Three well-separated unit-variance components; deterministic in seed.
std::vector<double> synthetic_mixture_data(std::size_t count, std::uint64_t seed);

std::vector<double> load_dataset(const std::string& path);

struct ReferenceMeasure1D {
    double a = 0.0;
    double b = 0.0;
    std::vector<double> bin_edges;
    std::vector<double> bin_probs;
};

// Integration window [lo, hi] outside which e^{−β(U−U_min)} is negligible,
// the normaliser Z over it, and a tabulated CDF for inverse sampling.
class Density1D {
public:
    Density1D(const Potential& potential, double beta, int panels = 4096);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double density(double q) const;
    double cdf(double q) const;
    double mass(double x0, double x1) const;
    double quantile(double u) const;

private:
    double integrate(double x0, double x1) const;

    std::shared_ptr<const Potential> potential_;
    double beta_;
    double shift_ = 0.0;
    double lo_ = 0.0;
    double hi_ = 0.0;
    double z_ = 1.0;
    std::vector<double> nodes_;
    std::vector<double> cum_;
};

ReferenceMeasure1D reference_measure_1d(const Potential& potential, double beta, int n_bins,
                                        int refinement = 1);

}  // namespace glelab
