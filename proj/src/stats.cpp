#include "glelab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "glelab/errors.hpp"

namespace glelab {

Histogram Histogram::with_edges(std::vector<double> edges) {
    if (edges.size() < 2) throw ValidationError("histogram: need at least two edges");
    for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i] > edges[i - 1])) throw ValidationError("histogram: edges must increase");
    }
    Histogram h;
    h.counts.assign(edges.size() - 1, 0);
    h.edges = std::move(edges);
    return h;
}

void Histogram::add(double x) {
    ++total;
    if (!(x >= edges.front()) || !(x < edges.back())) return;
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    const auto bin = static_cast<std::size_t>(it - edges.begin()) - 1;
    ++counts[std::min(bin, counts.size() - 1)];
}

void Histogram::merge(const Histogram& other) {
    if (edges.empty()) {
        *this = other;
        return;
    }
    if (other.edges != edges) throw ValidationError("histogram: cannot merge different edges");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
}

double mae(const Histogram& hist, const ReferenceMeasure1D& ref) {
    if (hist.edges.size() != ref.bin_edges.size()) {
        throw ValidationError("mae: histogram and reference have different bins");
    }
    for (std::size_t i = 0; i < hist.edges.size(); ++i) {
        const double tol = 1e-12 * std::max(1.0, std::abs(ref.bin_edges[i]));
        if (std::abs(hist.edges[i] - ref.bin_edges[i]) > tol) {
            throw ValidationError("mae: histogram and reference edges differ");
        }
    }
    if (hist.total == 0) throw ValidationError("mae: empty histogram");
    const double total = static_cast<double>(hist.total);
    double sum = 0.0;
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        sum += std::abs(static_cast<double>(hist.counts[i]) / total - ref.bin_probs[i]);
    }
    return sum / static_cast<double>(hist.counts.size());
}

Vector ChainRecord::mean_q() const { return sum_q / static_cast<double>(samples); }

Vector ChainRecord::var_q() const {
    const Vector mean = mean_q();
    return sum_q2 / static_cast<double>(samples) - mean.cwiseProduct(mean);
}

Vector ChainRecord::mean_qgrad() const { return sum_qgrad / static_cast<double>(samples); }

Vector ChainRecord::batch_stderr(int block) const {
    const Eigen::Index n = sum_q.size();
    std::vector<Vector> means;
    for (std::size_t b = 0; b < batches.size(); ++b) {
        if (batch_counts[b] == 0) continue;
        means.push_back(batches[b].segment(block * n, n) / static_cast<double>(batch_counts[b]));
    }
    if (means.size() < 2) return Vector::Constant(n, INFINITY);
    Vector avg = Vector::Zero(n);
    for (const auto& m : means) avg += m;
    avg /= static_cast<double>(means.size());
    Vector ss = Vector::Zero(n);
    for (const auto& m : means) ss += (m - avg).cwiseAbs2();
    const double k = static_cast<double>(means.size());
    return (ss / (k - 1.0) / k).cwiseSqrt();
}

Vector ChainRecord::stderr_q() const { return batch_stderr(0); }
Vector ChainRecord::stderr_q2() const { return batch_stderr(1); }
Vector ChainRecord::stderr_qgrad() const { return batch_stderr(2); }

void ChainRecord::merge(const ChainRecord& other) {
    if (samples == 0 && batches.empty()) {
        *this = other;
        return;
    }
    if (other.sum_q.size() != sum_q.size()) throw DimensionError("chain records differ in n");
    n_steps += other.n_steps;
    burn_in += other.burn_in;
    samples += other.samples;
    sum_q += other.sum_q;
    sum_q2 += other.sum_q2;
    sum_qgrad += other.sum_qgrad;
    if (!other.hist.edges.empty()) hist.merge(other.hist);
    batches.insert(batches.end(), other.batches.begin(), other.batches.end());
    batch_counts.insert(batch_counts.end(), other.batch_counts.begin(), other.batch_counts.end());
}

ChainRecord run_chain(Stepper& stepper, const Potential& potential, ExtendedState x,
                      const ChainOptions& options, std::uint64_t seed) {
    if (options.thin < 1) throw ValidationError("run_chain: thin must be at least 1");
    if (!(options.n_steps > options.burn_in)) {
        throw ValidationError("run_chain: n_steps must exceed burn_in");
    }
    if (options.batches < 1) throw ValidationError("run_chain: batches must be positive");
    const Eigen::Index n = x.q.size();
    if (n != potential.dim()) throw DimensionError("run_chain: state and potential differ in n");

    ChainRecord rec;
    rec.scheme = stepper.label();
    rec.h = stepper.time_step();
    rec.seed = seed;
    rec.n_steps = options.n_steps;
    rec.burn_in = options.burn_in;
    rec.thin = options.thin;
    rec.sum_q = Vector::Zero(n);
    rec.sum_q2 = Vector::Zero(n);
    rec.sum_qgrad = Vector::Zero(n);
    if (!options.hist_edges.empty()) rec.hist = Histogram::with_edges(options.hist_edges);
    const std::uint64_t expected = (options.n_steps - options.burn_in) / options.thin;
    const auto n_batches =
        static_cast<std::uint64_t>(std::min<std::uint64_t>(options.batches, std::max<std::uint64_t>(expected, 1)));
    rec.batches.assign(n_batches, Vector::Zero(3 * n));
    rec.batch_counts.assign(n_batches, 0);
    rec.series_stride = options.series_stride;
    if (options.series_stride > 0) {
        rec.series.assign(static_cast<std::size_t>(n), {});
        for (auto& s : rec.series) s.reserve(expected / options.series_stride + 1);
    }

    Vector grad(n);
    Vector qg(n);
    for (std::uint64_t k = 1; k <= options.n_steps; ++k) {
        stepper.step(x);
        if (!x.q.allFinite() || !x.p.allFinite() || ((k & 1023u) == 0 && !x.s.allFinite())) {
            throw DivergenceError(k, "chain diverged at step " + std::to_string(k));
        }
        if (k <= options.burn_in || (k - options.burn_in) % options.thin != 0) continue;
        const std::uint64_t idx = rec.samples++;
        if (!rec.hist.edges.empty()) rec.hist.add(x.q(0));
        if (options.config_temp) {
            potential.gradient(x.q, grad);
            qg = x.q.cwiseProduct(grad);
        } else {
            qg.setZero();
        }
        rec.sum_q += x.q;
        rec.sum_q2 += x.q.cwiseAbs2();
        rec.sum_qgrad += qg;
        const std::uint64_t b = std::min<std::uint64_t>(idx * n_batches / std::max<std::uint64_t>(expected, 1),
                                                        n_batches - 1);
        Vector& batch = rec.batches[b];
        batch.segment(0, n) += x.q;
        batch.segment(n, n) += x.q.cwiseAbs2();
        batch.segment(2 * n, n) += qg;
        ++rec.batch_counts[b];
        if (options.series_stride > 0 && idx % options.series_stride == 0) {
            for (Eigen::Index i = 0; i < n; ++i) rec.series[i].push_back(x.q(i));
        }
    }
    return rec;
}

Vector config_temp(const ChainRecord& record, double beta) {
    if (record.samples == 0) throw ValidationError("config_temp: record has no samples");
    const double kt = 1.0 / beta;
    return (record.mean_qgrad().array() - kt) / kt;
}

}  // namespace glelab
