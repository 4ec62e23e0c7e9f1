#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "glelab/errors.hpp"
#include "glelab/potentials.hpp"

namespace glelab {

namespace {

constexpr int kMaxComponents = 16;
using Buf = std::array<double, kMaxComponents>;

// Orthonormal basis of the sum-zero subspace of ℝ^K (Helmert contrasts).
Matrix helmert(int k) {
    Matrix h = Matrix::Zero(k, k - 1);
    for (int j = 1; j < k; ++j) {
        const double norm = std::sqrt(static_cast<double>(j) * (j + 1));
        for (int i = 0; i < j; ++i) h(i, j - 1) = 1.0 / norm;
        h(j, j - 1) = -static_cast<double>(j) / norm;
    }
    return h;
}

struct MixtureModel {
    std::vector<double> data;
    int k = 3;
    MixtureHyper hyper;
    Matrix basis;

    // log w from the unconstrained weight coordinates.
    void log_weights(const Vector& q, Buf& logw) const {
        double top = -INFINITY;
        for (int i = 0; i < k; ++i) {
            double x = 0.0;
            for (int j = 0; j < k - 1; ++j) x += basis(i, j) * q(j);
            logw[i] = x;
            top = std::max(top, x);
        }
        double sum = 0.0;
        for (int i = 0; i < k; ++i) sum += std::exp(logw[i] - top);
        const double lse = top + std::log(sum);
        for (int i = 0; i < k; ++i) logw[i] -= lse;
    }

    double evaluate(const Vector& q, Vector* grad) const {
        Buf logw{}, mu{}, ell{}, lam{}, term{}, resp_sum{}, g_mu{}, g_ell{};
        log_weights(q, logw);
        const int off_mu = k - 1;
        const int off_ell = 2 * k - 1;
        const int off_b = 3 * k - 1;
        for (int i = 0; i < k; ++i) {
            mu[i] = q(off_mu + i);
            ell[i] = q(off_ell + i);
            lam[i] = std::exp(ell[i]);
        }
        const double b = q(off_b);
        const double beta = std::exp(b);

        double loglik = 0.0;
        for (double y : data) {
            double top = -INFINITY;
            for (int i = 0; i < k; ++i) {
                const double d = y - mu[i];
                term[i] = logw[i] + 0.5 * ell[i] - 0.5 * lam[i] * d * d;
                top = std::max(top, term[i]);
            }
            double sum = 0.0;
            for (int i = 0; i < k; ++i) {
                term[i] = std::exp(term[i] - top);
                sum += term[i];
            }
            loglik += top + std::log(sum);
            if (grad) {
                for (int i = 0; i < k; ++i) {
                    const double r = term[i] / sum;
                    const double d = y - mu[i];
                    resp_sum[i] += r;
                    g_mu[i] += r * lam[i] * d;
                    g_ell[i] += r * (0.5 - 0.5 * lam[i] * d * d);
                }
            }
        }

        const double nc = static_cast<double>(k);
        double sum_lam = 0.0, sum_ell = 0.0, sum_mu2 = 0.0, sum_logw = 0.0;
        for (int i = 0; i < k; ++i) {
            sum_lam += lam[i];
            sum_ell += ell[i];
            sum_mu2 += (mu[i] - hyper.m) * (mu[i] - hyper.m);
            sum_logw += logw[i];
        }
        const double logpost = loglik - 0.5 * hyper.kappa * sum_mu2 +
                               (hyper.alpha - 1.0) * sum_ell - beta * (hyper.h + sum_lam) +
                               (nc * hyper.alpha + hyper.g - 1.0) * b + sum_ell + b + sum_logw;

        if (grad) {
            const double n = static_cast<double>(data.size());
            Buf g_x{};
            for (int i = 0; i < k; ++i) {
                const double w = std::exp(logw[i]);
                g_x[i] = resp_sum[i] - n * w + 1.0 - nc * w;
            }
            for (int j = 0; j < k - 1; ++j) {
                double acc = 0.0;
                for (int i = 0; i < k; ++i) acc += basis(i, j) * g_x[i];
                (*grad)(j) = -acc;
            }
            for (int i = 0; i < k; ++i) {
                (*grad)(off_mu + i) = -(g_mu[i] - hyper.kappa * (mu[i] - hyper.m));
                (*grad)(off_ell + i) = -(g_ell[i] + hyper.alpha - beta * lam[i]);
            }
            (*grad)(off_b) = -(nc * hyper.alpha + hyper.g - beta * (hyper.h + sum_lam));
        }
        return -logpost;
    }
};

}  // namespace

int mixture_dim(int n_components) { return 3 * n_components; }

MixtureModelSpec make_mixture_spec(std::vector<double> data, int n_components) {
    if (data.empty()) throw ValidationError("mixture: dataset is empty");
    const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) throw ValidationError("mixture: dataset has zero range");
    MixtureModelSpec spec;
    spec.n_components = n_components;
    spec.hyper.m = std::accumulate(data.begin(), data.end(), 0.0) / static_cast<double>(data.size());
    spec.hyper.kappa = 4.0 / (range * range);
    spec.hyper.alpha = 2.0;
    spec.hyper.g = 0.2;
    spec.hyper.h = 100.0 * spec.hyper.g / (spec.hyper.alpha * range * range);
    spec.data = std::move(data);
    return spec;
}

MixturePoint mixture_unpack(const Vector& q, int n_components) {
    const int k = n_components;
    if (q.size() != mixture_dim(k)) throw DimensionError("mixture: coordinate vector has wrong size");
    const Vector x = helmert(k) * q.head(k - 1);
    MixturePoint p;
    p.weights = (x.array() - x.maxCoeff()).exp();
    p.weights /= p.weights.sum();
    p.means = q.segment(k - 1, k);
    p.precisions = q.segment(2 * k - 1, k).array().exp();
    p.beta = std::exp(q(3 * k - 1));
    return p;
}

Vector mixture_pack(const MixturePoint& point) {
    const int k = static_cast<int>(point.weights.size());
    Vector q(mixture_dim(k));
    const Vector logw = point.weights.array().log();
    q.head(k - 1) = helmert(k).transpose() * logw;
    q.segment(k - 1, k) = point.means;
    q.segment(2 * k - 1, k) = point.precisions.array().log();
    q(3 * k - 1) = std::log(point.beta);
    return q;
}

std::vector<std::string> mixture_param_names(int n_components) {
    std::vector<std::string> names;
    for (int j = 1; j < n_components; ++j) names.push_back("z" + std::to_string(j));
    for (int j = 1; j <= n_components; ++j) names.push_back("mu" + std::to_string(j));
    for (int j = 1; j <= n_components; ++j) names.push_back("log_lambda" + std::to_string(j));
    names.push_back("log_beta");
    return names;
}

Potential mixture_posterior(const MixtureModelSpec& spec) {
    if (spec.data.empty()) throw ValidationError("mixture: dataset is empty");
    if (spec.n_components < 2 || spec.n_components > kMaxComponents) {
        throw ValidationError("mixture: n_components must lie in [2, 16]");
    }
    auto model = std::make_shared<MixtureModel>();
    model->data = spec.data;
    model->k = spec.n_components;
    model->hyper = spec.hyper;
    model->basis = helmert(spec.n_components);
    Potential pot(
        "mixture", mixture_dim(spec.n_components),
        [model](const Vector& q) { return model->evaluate(q, nullptr); },
        [model](const Vector& q, Vector& g) { model->evaluate(q, &g); });

    const auto [lo, hi] = std::minmax_element(spec.data.begin(), spec.data.end());
    const double range = std::max(*hi - *lo, 1e-12);
    MixturePoint probe;
    const int k = spec.n_components;
    probe.weights = Vector::Constant(k, 1.0 / k);
    probe.means = Vector::LinSpaced(k, *lo + 0.25 * range, *hi - 0.25 * range);
    probe.precisions = Vector::Constant(k, 16.0 / (range * range));
    probe.beta = 1.0;
    const Vector centre = mixture_pack(probe);
    std::vector<Vector> points{centre};
    Vector tilted = centre;
    for (int i = 0; i < tilted.size(); ++i) tilted(i) += 0.05 * std::cos(1.7 * i);
    points.push_back(tilted);
    const double err = gradient_check(pot, points);
    if (!(err <= 1e-6)) {
        throw ValidationError("mixture: gradient disagrees with finite differences (" +
                              std::to_string(err) + ")");
    }
    return pot;
}

}  // namespace glelab
