#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glelab/integrators.hpp"
#include "glelab/potentials.hpp"

namespace glelab {

struct Histogram {
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    static Histogram with_edges(std::vector<double> edges);
    void add(double x);
    void merge(const Histogram& other);
};

double mae(const Histogram& hist, const ReferenceMeasure1D& ref);

struct ChainOptions {
    std::uint64_t n_steps = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t thin = 1;
    // Histogram of q₀ on these edges (skipped when empty).
    std::vector<double> hist_edges;
    // Accumulate q·∇U (one extra gradient evaluation per sample).
    bool config_temp = false;
    // Keep every series_stride-th sample of each q coordinate (0: none).
    std::uint64_t series_stride = 0;
    int batches = 32;
};

// Per-sample observables are q, q², q∘∇U; batch sums allow batch-means
// standard errors and survive merging across chains.
struct ChainRecord {
    std::string scheme;
    double h = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t n_steps = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t thin = 1;
    std::uint64_t samples = 0;
    Histogram hist;
    Vector sum_q, sum_q2, sum_qgrad;
    std::vector<Vector> batches;  // each [Σq, Σq², Σq∘∇U], length 3n
    std::vector<std::uint64_t> batch_counts;
    std::vector<std::vector<double>> series;  // per coordinate
    std::uint64_t series_stride = 0;

    Vector mean_q() const;
    Vector var_q() const;
    Vector mean_qgrad() const;
    // Batch-means standard errors of mean(q), mean(q²), mean(q∘∇U).
    Vector stderr_q() const;
    Vector stderr_q2() const;
    Vector stderr_qgrad() const;

    void merge(const ChainRecord& other);

private:
    Vector batch_stderr(int block) const;
};

ChainRecord run_chain(Stepper& stepper, const Potential& potential, ExtendedState init,
                      const ChainOptions& options, std::uint64_t seed = 0);

struct IactResult {
    double tau_normalized = 0.0;
    double tau_unnormalized = 0.0;
};

IactResult iact(const std::vector<double>& series, double dt);

// Biased empirical autocovariance Ĉ(0..max_lag) via FFT.
std::vector<double> autocovariance(const std::vector<double>& series);

Vector config_temp(const ChainRecord& record, double beta);

// Exact equilibrium draws for a 1-D potential: q by inverse CDF, p ∼ N(0, β⁻¹M),
// s ∼ N(0, β⁻¹Q).
class EquilibriumSampler1D {
public:
    EquilibriumSampler1D(const Potential& potential, const GleParams& params);
    ExtendedState draw(NoiseSource& noise) const;
    double draw_q(NoiseSource& noise) const;

private:
    Density1D density_;
    Matrix p_factor_, s_factor_;
};

ExtendedState equilibrium_init_1d(const Potential& potential, const GleParams& params,
                                  NoiseSource& noise);

}  // namespace glelab
