#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "glelab/integrators.hpp"
#include "glelab/kernel.hpp"
#include "glelab/potentials.hpp"

namespace glelab {

struct ExperimentConfig {
    std::string potential = "double_well";  // harmonic | double_well | mixture
    std::vector<double> omega{1.0};          // harmonic: diagonal of Ω
    std::string dataset;                     // mixture: path or "synthetic"
    std::size_t synthetic_size = 482;

    std::string kernel = "prony";  // prony | exp | kv_8_8 | file
    int prony_r = 0;
    std::vector<PronyTerm> prony_terms;  // overrides prony_r when non-empty
    ExpKernelSpec exp{1.0, 1.0, 0.0};
    std::string kernel_file;

    std::vector<std::string> schemes{"BAOAB"};
    std::vector<double> stepsizes{0.1};
    double t_total = 1e6;
    int chains = 8;
    std::uint64_t master_seed = 1;
    double beta = 1.0;
    int n_bins = 100;
    double burn_in_fraction = 0.01;
    std::uint64_t thin = 1;
    std::string output_dir = "out";

    double ld_friction = 1.0;
    double mobility = 1.0;
    double h_tilde = 0.0;
    double ld_h = 0.01;  // mixture: step of the LD-BAOAB comparison run
};

ExperimentConfig parse_config(std::istream& in, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

// Position dimension implied by the potential choice.
int config_dimension(const ExperimentConfig& config);
Potential make_potential(const ExperimentConfig& config);
GleParams make_params(const ExperimentConfig& config, int n);
BaselineSpec make_baseline(const ExperimentConfig& config, int n);

struct SweepRow {
    std::string scheme;
    double h = 0.0;
    std::uint64_t steps = 0;
    int chains = 0;
    double mae = 0.0;
    double mae_stderr = 0.0;
    double var_q = 0.0;
    double var_q_stderr = 0.0;
    double iact_q = 0.0;
    bool diverged = false;
};

struct SlopeRow {
    std::string scheme;
    double slope = 0.0;
    double intercept = 0.0;
    int points = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SlopeRow> slopes;
};

struct RunOptions {
    int threads = 0;  // 0: hardware concurrency
    std::optional<std::uint64_t> seed;
    std::ostream* log = nullptr;
};

SweepResult run_sweep(const ExperimentConfig& config, const RunOptions& options);
// Least-squares slope of log(mae) against log(h) over non-diverged rows.
std::vector<SlopeRow> fit_slopes(const std::vector<SweepRow>& rows);
void write_sweep_csv(const SweepResult& result, const std::string& output_dir);

struct MixtureRow {
    std::string scheme;
    double h = 0.0;
    std::string param;
    double ct_rel_err = 0.0;
    double iact = 0.0;
};

struct MixtureResult {
    std::vector<MixtureRow> rows;
    std::vector<std::string> diverged;  // schemes that blew up
};

MixtureResult run_mixture(const ExperimentConfig& config, bool synthetic,
                          const RunOptions& options);
void write_mixture_csv(const MixtureResult& result, const std::string& output_dir);

std::string format_number(double value);

// Runs jobs 0..count−1 on a pool of `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job);

}  // namespace glelab
