#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "glelab/errors.hpp"
#include "glelab/experiment.hpp"
#include "glelab/stats.hpp"
#include "glelab/theory.hpp"

namespace glelab {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& job) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

constexpr std::uint64_t kStepperStream = 0;
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kMaxSeries = std::uint64_t{1} << 20;

struct ChainOutcome {
    bool diverged = false;
    ChainRecord record;
    double mae = NAN;
    double iact = NAN;
};

ExtendedState gaussian_state(const Matrix& q_cov, const GleParams& params, int aux,
                             NoiseSource& noise) {
    ExtendedState x;
    const Eigen::Index n = params.n();
    Vector r(n);
    noise.fill(r);
    x.q = psd_factor(q_cov) * r;
    noise.fill(r);
    x.p = psd_factor(params.mass() / params.beta()) * r;
    Vector rs(aux);
    noise.fill(rs);
    x.s = aux == params.m() ? Vector(psd_factor(params.q_aux() / params.beta()) * rs)
                            : Vector(rs / std::sqrt(params.beta()));
    return x;
}

std::uint64_t series_stride(std::uint64_t samples) {
    return std::max<std::uint64_t>(1, (samples + kMaxSeries - 1) / kMaxSeries);
}

}  // namespace

std::vector<SlopeRow> fit_slopes(const std::vector<SweepRow>& rows) {
    std::vector<std::string> order;
    for (const auto& r : rows) {
        if (std::find(order.begin(), order.end(), r.scheme) == order.end()) order.push_back(r.scheme);
    }
    std::vector<SlopeRow> out;
    for (const auto& name : order) {
        std::vector<double> xs, ys;
        for (const auto& r : rows) {
            if (r.scheme == name && !r.diverged && r.mae > 0.0 && std::isfinite(r.mae)) {
                xs.push_back(std::log(r.h));
                ys.push_back(std::log(r.mae));
            }
        }
        SlopeRow row;
        row.scheme = name;
        row.points = static_cast<int>(xs.size());
        if (xs.size() >= 2) {
            const double k = static_cast<double>(xs.size());
            const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
            const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
            double sxx = 0.0, sxy = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sxx += (xs[i] - mx) * (xs[i] - mx);
                sxy += (xs[i] - mx) * (ys[i] - my);
            }
            row.slope = sxx > 0.0 ? sxy / sxx : NAN;
            row.intercept = my - row.slope * mx;
        } else {
            row.slope = NAN;
            row.intercept = NAN;
        }
        out.push_back(row);
    }
    return out;
}

SweepResult run_sweep(const ExperimentConfig& config, const RunOptions& options) {
    if (config.potential == "mixture") {
        throw ConfigError("experiment.potential", "use the mixture command for mixture targets");
    }
    const std::uint64_t master = options.seed.value_or(config.master_seed);
    const int n = config_dimension(config);
    const Potential potential = make_potential(config);
    const GleParams params = make_params(config, n);
    const BaselineSpec baseline = make_baseline(config, n);
    std::optional<ReferenceMeasure1D> reference;
    std::optional<EquilibriumSampler1D> sampler;
    if (n == 1) {
        reference = reference_measure_1d(potential, config.beta, config.n_bins);
        sampler.emplace(potential, params);
    }
    Matrix q_cov = Matrix::Identity(n, n) / config.beta;
    if (potential.quadratic()) {
        q_cov = potential.quadratic()->llt().solve(Matrix::Identity(n, n)) / config.beta;
    }

    std::vector<SchemeSpec> schemes;
    for (const auto& s : config.schemes) schemes.push_back(parse_scheme(s));
    const std::size_t n_h = config.stepsizes.size();
    const std::size_t per_scheme = n_h * static_cast<std::size_t>(config.chains);
    const std::size_t jobs = schemes.size() * per_scheme;

    // Oracle pre-check on quadratic targets: a linear chain with spectral
    // radius ≥ 1 diverges, so the row is flagged without running it.
    std::vector<char> oracle_unstable(schemes.size() * n_h, 0);
    if (potential.quadratic()) {
        for (std::size_t si = 0; si < schemes.size(); ++si) {
            for (std::size_t hi = 0; hi < n_h; ++hi) {
                try {
                    const double rho = chain_spectral_radius(schemes[si], *potential.quadratic(),
                                                             params, config.stepsizes[hi], &baseline);
                    oracle_unstable[si * n_h + hi] = rho >= 1.0;
                } catch (const NumericalError&) {
                    oracle_unstable[si * n_h + hi] = 1;
                }
            }
        }
    }

    std::vector<ChainOutcome> outcomes(jobs);
    std::mutex log_mutex;
    parallel_for(jobs, options.threads, [&](std::size_t job) {
        const std::size_t si = job / per_scheme;
        const std::size_t hi = (job % per_scheme) / static_cast<std::size_t>(config.chains);
        const auto chain = static_cast<std::uint64_t>(job % static_cast<std::size_t>(config.chains));
        ChainOutcome& out = outcomes[job];
        if (oracle_unstable[si * n_h + hi]) {
            out.diverged = true;
            return;
        }
        const double h = config.stepsizes[hi];
        GaussianNoise init_noise{master, chain, kInitStream};
        auto stepper = build_integrator(schemes[si], params, potential, h,
                                        std::make_unique<GaussianNoise>(
                                            std::initializer_list<std::uint64_t>{master, chain, kStepperStream}),
                                        &baseline);
        ExtendedState x = sampler ? sampler->draw(init_noise)
                                  : gaussian_state(q_cov, params, params.m(), init_noise);
        if (x.s.size() != stepper->aux_dim()) x.s = Vector::Zero(stepper->aux_dim());

        ChainOptions opts;
        opts.n_steps = static_cast<std::uint64_t>(std::llround(config.t_total / stepper->time_step()));
        opts.burn_in = static_cast<std::uint64_t>(config.burn_in_fraction * static_cast<double>(opts.n_steps));
        if (opts.n_steps <= opts.burn_in) opts.n_steps = opts.burn_in + 1;
        opts.thin = config.thin;
        if (reference) opts.hist_edges = reference->bin_edges;
        opts.config_temp = true;
        opts.series_stride = series_stride((opts.n_steps - opts.burn_in) / opts.thin);
        try {
            out.record = run_chain(*stepper, potential, std::move(x), opts, chain);
        } catch (const DivergenceError& e) {
            out.diverged = true;
            if (options.log) {
                std::lock_guard<std::mutex> lock(log_mutex);
                *options.log << schemes[si].name() << " h=" << format_number(h) << " chain " << chain
                             << ": " << e.what() << '\n';
            }
            return;
        }
        if (reference) out.mae = mae(out.record.hist, *reference);
        if (out.record.series.size() > 0 && out.record.series[0].size() >= 100) {
            try {
                const double dt = stepper->time_step() * static_cast<double>(opts.thin * opts.series_stride);
                out.iact = iact(out.record.series[0], dt).tau_normalized * dt;
            } catch (const DomainError&) {
                out.iact = NAN;
            }
        }
        out.record.series.clear();
        out.record.series.shrink_to_fit();
        if (options.log) {
            std::lock_guard<std::mutex> lock(log_mutex);
            *options.log << schemes[si].name() << " h=" << format_number(h) << " chain " << chain
                         << " done (" << opts.n_steps << " steps)\n";
        }
    });

    SweepResult result;
    for (std::size_t si = 0; si < schemes.size(); ++si) {
        for (std::size_t hi = 0; hi < n_h; ++hi) {
            SweepRow row;
            row.scheme = schemes[si].name();
            row.h = config.stepsizes[hi];
            row.chains = config.chains;
            ChainRecord merged;
            std::vector<double> maes, iacts;
            for (int c = 0; c < config.chains; ++c) {
                const ChainOutcome& o = outcomes[si * per_scheme + hi * config.chains + c];
                if (o.diverged) {
                    row.diverged = true;
                    continue;
                }
                merged.merge(o.record);
                row.steps = o.record.n_steps;
                maes.push_back(o.mae);
                if (std::isfinite(o.iact)) iacts.push_back(o.iact);
            }
            if (row.diverged) {
                row.mae = row.mae_stderr = row.var_q = row.var_q_stderr = row.iact_q = NAN;
                if (row.steps == 0) {
                    row.steps = static_cast<std::uint64_t>(std::llround(config.t_total / row.h));
                }
                result.rows.push_back(row);
                continue;
            }
            row.var_q = merged.var_q()(0);
            row.var_q_stderr = merged.stderr_q2()(0);
            if (reference) {
                row.mae = mae(merged.hist, *reference);
                if (maes.size() >= 2) {
                    const double k = static_cast<double>(maes.size());
                    const double mean = std::accumulate(maes.begin(), maes.end(), 0.0) / k;
                    double ss = 0.0;
                    for (double m : maes) ss += (m - mean) * (m - mean);
                    row.mae_stderr = std::sqrt(ss / (k - 1.0) / k);
                } else {
                    row.mae_stderr = NAN;
                }
            } else {
                row.mae = row.mae_stderr = NAN;
            }
            row.iact_q = iacts.empty() ? NAN
                                       : std::accumulate(iacts.begin(), iacts.end(), 0.0) /
                                             static_cast<double>(iacts.size());
            result.rows.push_back(row);
        }
    }
    result.slopes = fit_slopes(result.rows);
    return result;
}

void write_sweep_csv(const SweepResult& result, const std::string& output_dir) {
    std::filesystem::create_directories(output_dir);
    std::ofstream rows(std::filesystem::path(output_dir) / "sweep.csv", std::ios::binary);
    if (!rows) throw Error("cannot write sweep.csv in '" + output_dir + "'");
    rows << "scheme,h,steps,chains,mae,mae_stderr,var_q,iact_q,diverged,var_q_stderr\n";
    for (const auto& r : result.rows) {
        rows << r.scheme << ',' << format_number(r.h) << ',' << r.steps << ',' << r.chains << ','
             << format_number(r.mae) << ',' << format_number(r.mae_stderr) << ','
             << format_number(r.var_q) << ',' << format_number(r.iact_q) << ','
             << (r.diverged ? "true" : "false") << ',' << format_number(r.var_q_stderr) << '\n';
    }
    std::ofstream slopes(std::filesystem::path(output_dir) / "slopes.csv", std::ios::binary);
    if (!slopes) throw Error("cannot write slopes.csv in '" + output_dir + "'");
    slopes << "scheme,slope,intercept,points\n";
    for (const auto& s : result.slopes) {
        slopes << s.scheme << ',' << format_number(s.slope) << ',' << format_number(s.intercept)
               << ',' << s.points << '\n';
    }
}


namespace {

MixturePoint mixture_start(const std::vector<double>& data, int k) {
    std::vector<double> sorted = data;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
    double var = 0.0;
    for (double y : sorted) var += (y - mean) * (y - mean);
    var /= n;
    MixturePoint pt;
    pt.weights = Vector::Constant(k, 1.0 / k);
    pt.means.resize(k);
    for (int j = 0; j < k; ++j) {
        const double u = (2.0 * j + 1.0) / (2.0 * k);
        const auto idx = std::min<std::size_t>(sorted.size() - 1,
                                               static_cast<std::size_t>(u * n));
        pt.means(j) = sorted[idx];
    }
    const double lambda = static_cast<double>(k * k) / var;
    pt.precisions = Vector::Constant(k, lambda);
    pt.beta = 2.0 / lambda;
    return pt;
}

}  // namespace

MixtureResult run_mixture(const ExperimentConfig& config, bool synthetic, const RunOptions& options) {
    const std::uint64_t master = options.seed.value_or(config.master_seed);
    std::vector<double> data;
    if (synthetic || config.dataset == "synthetic") {
        data = synthetic_mixture_data(config.synthetic_size, master);
    } else {
        if (config.dataset.empty()) throw ConfigError("potential.dataset", "required for mixture");
        data = load_dataset(config.dataset);
    }
    const int k = 3;
    const int n = mixture_dim(k);
    const Potential potential = mixture_posterior(make_mixture_spec(data, k));
    const Vector q0 = mixture_pack(mixture_start(data, k));

    const GleParams gle = builtin_kv_8_8(n, config.beta);
    const GleParams ld = GleParams(Matrix::Identity(n, n), Matrix::Zero(n, n), Matrix::Zero(n, 1),
                                   Matrix::Zero(1, n), Matrix::Identity(1, 1), Matrix::Identity(1, 1),
                                   config.beta);
    BaselineSpec baseline;
    baseline.friction = config.ld_friction * Matrix::Identity(n, n);

    struct Run {
        SchemeSpec scheme;
        const GleParams* params;
        double h;
    };
    const double h_gle = config.stepsizes.empty() ? 0.02 : config.stepsizes.front();
    const std::vector<Run> runs{{parse_scheme("gle-BAOAB"), &gle, h_gle},
                                {parse_scheme("gle-OBABO"), &gle, h_gle},
                                {parse_scheme("ld-BAOAB"), &ld, config.ld_h}};

    const auto chains = static_cast<std::size_t>(config.chains);
    std::vector<ChainOutcome> outcomes(runs.size() * chains);
    std::vector<std::vector<double>> iacts(outcomes.size());
    std::mutex log_mutex;
    parallel_for(outcomes.size(), options.threads, [&](std::size_t job) {
        const Run& run = runs[job / chains];
        const auto chain = static_cast<std::uint64_t>(job % chains);
        ChainOutcome& out = outcomes[job];
        GaussianNoise init_noise{master, chain, kInitStream};
        auto stepper = build_integrator(run.scheme, *run.params, potential, run.h,
                                        std::make_unique<GaussianNoise>(
                                            std::initializer_list<std::uint64_t>{master, chain, kStepperStream}),
                                        &baseline);
        ExtendedState x;
        x.q = q0;
        x.p = Vector(n);
        init_noise.fill(x.p);
        x.p /= std::sqrt(config.beta);
        x.s = Vector(stepper->aux_dim());
        init_noise.fill(x.s);
        x.s /= std::sqrt(config.beta);
        if (stepper->aux_dim() == run.params->m()) x.s = psd_factor(run.params->q_aux()) * x.s;

        ChainOptions opts;
        opts.n_steps = static_cast<std::uint64_t>(std::llround(config.t_total / stepper->time_step()));
        opts.burn_in = static_cast<std::uint64_t>(config.burn_in_fraction * static_cast<double>(opts.n_steps));
        if (opts.n_steps <= opts.burn_in) opts.n_steps = opts.burn_in + 1;
        opts.thin = config.thin;
        opts.config_temp = true;
        opts.series_stride = series_stride((opts.n_steps - opts.burn_in) / opts.thin);
        try {
            out.record = run_chain(*stepper, potential, std::move(x), opts, chain);
        } catch (const DivergenceError& e) {
            out.diverged = true;
            if (options.log) {
                std::lock_guard<std::mutex> lock(log_mutex);
                *options.log << run.scheme.name() << " chain " << chain << ": " << e.what() << '\n';
            }
            return;
        }
        const double dt = stepper->time_step() * static_cast<double>(opts.thin * opts.series_stride);
        for (int i = 0; i < n; ++i) {
            double tau = NAN;
            try {
                if (out.record.series[i].size() >= 100) tau = iact(out.record.series[i], dt).tau_normalized * dt;
            } catch (const DomainError&) {
            }
            iacts[job].push_back(tau);
        }
        out.record.series.clear();
        if (options.log) {
            std::lock_guard<std::mutex> lock(log_mutex);
            *options.log << run.scheme.name() << " chain " << chain << " done (" << opts.n_steps
                         << " steps)\n";
        }
    });

    MixtureResult result;
    const auto names = mixture_param_names(k);
    for (std::size_t r = 0; r < runs.size(); ++r) {
        ChainRecord merged;
        bool diverged = false;
        Vector tau_sum = Vector::Zero(n);
        Eigen::VectorXi tau_count = Eigen::VectorXi::Zero(n);
        for (std::size_t c = 0; c < chains; ++c) {
            const std::size_t job = r * chains + c;
            if (outcomes[job].diverged) {
                diverged = true;
                continue;
            }
            merged.merge(outcomes[job].record);
            for (int i = 0; i < n; ++i) {
                if (std::isfinite(iacts[job][i])) {
                    tau_sum(i) += iacts[job][i];
                    ++tau_count(i);
                }
            }
        }
        if (diverged) result.diverged.push_back(runs[r].scheme.name());
        const Vector ct = (!diverged && merged.samples > 0) ? config_temp(merged, config.beta)
                                                             : Vector::Constant(n, NAN);
        for (int i = 0; i < n; ++i) {
            MixtureRow row;
            row.scheme = runs[r].scheme.name();
            row.h = runs[r].h;
            row.param = names[i];
            row.ct_rel_err = ct(i);
            row.iact = (!diverged && tau_count(i) > 0) ? tau_sum(i) / tau_count(i) : NAN;
            result.rows.push_back(row);
        }
    }
    return result;
}

void write_mixture_csv(const MixtureResult& result, const std::string& output_dir) {
    std::filesystem::create_directories(output_dir);
    std::ofstream out(std::filesystem::path(output_dir) / "mixture.csv", std::ios::binary);
    if (!out) throw Error("cannot write mixture.csv in '" + output_dir + "'");
    out << "scheme,h,param,ct_rel_err,iact\n";
    for (const auto& r : result.rows) {
        out << r.scheme << ',' << format_number(r.h) << ',' << r.param << ','
            << format_number(r.ct_rel_err) << ',' << format_number(r.iact) << '\n';
    }
}

}  // namespace glelab
