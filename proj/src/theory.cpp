#include "glelab/theory.hpp"

#include <cmath>

#include "glelab/errors.hpp"

namespace glelab {

namespace {

struct Chain {
    Matrix e;
    Matrix c;

    explicit Chain(Eigen::Index dim) : e(Matrix::Identity(dim, dim)), c(Matrix::Zero(dim, dim)) {}

    void then(const Matrix& ei, const Matrix& ci) {
        e = ei * e;
        c = ei * c * ei.transpose() + ci;
    }
    void then(const Matrix& ei) { then(ei, Matrix::Zero(ei.rows(), ei.cols())); }
};

// Blocks of the (q, p, s) layout.
struct Layout {
    Eigen::Index n, m;
    Eigen::Index dim() const { return 2 * n + m; }
};

Matrix psi_a(const Layout& l, const Matrix& minv, double t) {
    Matrix e = Matrix::Identity(l.dim(), l.dim());
    e.block(0, l.n, l.n, l.n) = t * minv;
    return e;
}

Matrix psi_b(const Layout& l, const Matrix& omega, double t) {
    Matrix e = Matrix::Identity(l.dim(), l.dim());
    e.block(l.n, 0, l.n, l.n) = -t * omega;
    return e;
}

void add_o(Chain& chain, const Layout& l, const GleParams& params, double t) {
    const OStepCache cache = make_ostep(params, t);
    Matrix e = Matrix::Identity(l.dim(), l.dim());
    e.bottomRightCorner(l.n + l.m, l.n + l.m) = cache.f;
    Matrix c = Matrix::Zero(l.dim(), l.dim());
    c.bottomRightCorner(l.n + l.m, l.n + l.m) = cache.s_factor * cache.s_factor.transpose();
    chain.then(e, c);
}

void add_s(Chain& chain, const Layout& l, const GleParams& params, const Matrix& omega,
           double t) {
    const SStepCache cache = make_sstep(params, t);
    Matrix e = Matrix::Identity(l.dim(), l.dim());
    e.bottomRightCorner(l.n + l.m, l.n + l.m) = cache.o.f;
    e.block(l.n, 0, l.n + l.m, l.n) = -cache.drift * omega;
    Matrix c = Matrix::Zero(l.dim(), l.dim());
    c.bottomRightCorner(l.n + l.m, l.n + l.m) = cache.o.s_factor * cache.o.s_factor.transpose();
    chain.then(e, c);
}

LinearStepMatrices splitting_chain(const SchemeSpec& scheme, const Matrix& omega,
                                   const GleParams& params, double h) {
    const Layout l{params.n(), params.m()};
    Chain chain(l.dim());
    auto apply = [&](char letter, double t) {
        switch (letter) {
            case 'A': chain.then(psi_a(l, params.mass_inv(), t)); break;
            case 'B': chain.then(psi_b(l, omega, t)); break;
            case 'O': add_o(chain, l, params, t); break;
            case 'S': add_s(chain, l, params, omega, t); break;
        }
    };
    if (scheme.kind == SchemeKind::Palindrome) {
        const SchemeSpec checked = parse_scheme(scheme.word);
        const double frac[5] = {0.5, 0.5, 1.0, 0.5, 0.5};
        for (int i = 0; i < 5; ++i) apply(checked.word[i], frac[i] * h);
    } else if (scheme.kind == SchemeKind::Asa) {
        apply('A', 0.5 * h);
        apply('S', h);
        apply('A', 0.5 * h);
    } else {
        apply('S', 0.5 * h);
        apply('A', h);
        apply('S', 0.5 * h);
    }
    return {chain.e, chain.c};
}

LinearStepMatrices ld_baoab_chain(const Matrix& omega, const GleParams& params, double h,
                                  const BaselineSpec& baseline) {
    const Eigen::Index n = params.n();
    const Matrix& minv = params.mass_inv();
    const Matrix f = expm(-h * baseline.friction * minv);
    Matrix noise = (params.mass() - f * params.mass() * f.transpose()) / params.beta();
    noise = 0.5 * (noise + noise.transpose());
    Chain chain(2 * n);
    Matrix b = Matrix::Identity(2 * n, 2 * n);
    b.block(n, 0, n, n) = -0.5 * h * omega;
    Matrix a = Matrix::Identity(2 * n, 2 * n);
    a.block(0, n, n, n) = 0.5 * h * minv;
    Matrix o = Matrix::Identity(2 * n, 2 * n);
    o.block(n, n, n, n) = f;
    Matrix oc = Matrix::Zero(2 * n, 2 * n);
    oc.block(n, n, n, n) = noise;
    chain.then(b);
    chain.then(a);
    chain.then(o, oc);
    chain.then(a);
    chain.then(b);
    return {chain.e, chain.c};
}

LinearStepMatrices baoab_limit_chain(const Matrix& omega, const GleParams& params, double h,
                                     const BaselineSpec& baseline) {
    const Eigen::Index n = params.n();
    const double ht = baseline.h_tilde > 0.0 ? baseline.h_tilde : h;
    const Matrix sigma = spd_sqrt(2.0 * ht * baseline.mobility / params.beta());
    Matrix e = Matrix::Zero(2 * n, 2 * n);
    e.topLeftCorner(n, n) = Matrix::Identity(n, n) - ht * baseline.mobility * omega;
    e.topRightCorner(n, n) = 0.5 * sigma;
    Matrix g(2 * n, n);
    g.topRows(n) = 0.5 * sigma;
    g.bottomRows(n) = Matrix::Identity(n, n);
    return {e, g * g.transpose()};
}

LinearStepMatrices bb_chain(bool bacocab, const Matrix& omega, const GleParams& params, double h,
                            const BaselineSpec& baseline) {
    const Eigen::Index n = params.n();
    const auto k = static_cast<Eigen::Index>(baseline.prony_terms.size());
    const Layout l{n, n * k};
    const Matrix& minv = params.mass_inv();
    // Σ_k s_ik as a map from s to ℝⁿ.
    Matrix sum = Matrix::Zero(n, n * k);
    for (Eigen::Index i = 0; i < n; ++i) sum.block(i, i * k, 1, k).setOnes();

    auto kick = [&](double t, bool grad, bool aux) {
        Matrix e = Matrix::Identity(l.dim(), l.dim());
        if (grad) e.block(n, 0, n, n) = -t * omega;
        if (aux) e.block(n, 2 * n, n, n * k) = t * sum;
        return e;
    };
    Matrix relax = Matrix::Identity(l.dim(), l.dim());
    Matrix relax_cov = Matrix::Zero(l.dim(), l.dim());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const BbTerm& term = baseline.prony_terms[static_cast<std::size_t>(j)];
            const Eigen::Index row = 2 * n + i * k + j;
            const double theta = bb_theta(h, term.tau);
            relax(row, row) = theta;
            relax.block(row, n, 1, n) = -(1.0 - theta) * term.c * minv.row(i);
            const double amp = bb_alpha(h, term.tau) * std::sqrt(2.0 * term.c / params.beta());
            relax_cov(row, row) = amp * amp;
        }
    }
    Chain chain(l.dim());
    if (!bacocab) {
        chain.then(kick(0.5 * h, true, true));
        chain.then(psi_a(l, minv, h));
        chain.then(relax, relax_cov);
        chain.then(kick(0.5 * h, true, true));
    } else {
        chain.then(kick(0.5 * h, true, false));
        chain.then(psi_a(l, minv, 0.5 * h));
        chain.then(kick(0.5 * h, false, true));
        chain.then(relax, relax_cov);
        chain.then(kick(0.5 * h, false, true));
        chain.then(psi_a(l, minv, 0.5 * h));
        chain.then(kick(0.5 * h, true, false));
    }
    return {chain.e, chain.c};
}

void check_omega(const Matrix& omega, const GleParams& params) {
    if (omega.rows() != params.n() || omega.cols() != params.n()) {
        throw DimensionError("oracle: omega must be n×n");
    }
}

}  // namespace

LinearStepMatrices linear_step(const SchemeSpec& scheme, const Matrix& omega,
                               const GleParams& params, double h, const BaselineSpec* baseline) {
    check_omega(omega, params);
    if (!(h > 0.0)) throw DomainError("oracle: h must be positive");
    switch (scheme.kind) {
        case SchemeKind::Palindrome:
        case SchemeKind::Asa:
        case SchemeKind::Sas:
            return splitting_chain(scheme, omega, params, h);
        default:
            break;
    }
    if (!baseline) throw SchemeError(scheme.name() + ": baseline data required");
    switch (scheme.kind) {
        case SchemeKind::LdBaoab: return ld_baoab_chain(omega, params, h, *baseline);
        case SchemeKind::BaoabLimit: return baoab_limit_chain(omega, params, h, *baseline);
        case SchemeKind::BbBaob: return bb_chain(false, omega, params, h, *baseline);
        case SchemeKind::BbBacocab: return bb_chain(true, omega, params, h, *baseline);
        default: throw SchemeError("unknown scheme");
    }
}

CovarianceResult analytic_invariant_cov(const SchemeSpec& scheme, const Matrix& omega,
                                        const GleParams& params, double h) {
    check_omega(omega, params);
    if (scheme.kind != SchemeKind::Palindrome) {
        throw UnsupportedError("analytic invariant covariance: unsupported scheme " + scheme.name());
    }
    const int n = params.n();
    const int m = params.m();
    const double shrink = 1.0 - h * h / 4.0;
    const Matrix omega_inv = omega.llt().solve(Matrix::Identity(n, n));
    CovarianceResult out;
    out.mean = Vector::Zero(2 * n + m);
    out.cov = Matrix::Zero(2 * n + m, 2 * n + m);
    if (scheme.word == "BAOAB" || scheme.word == "ABOBA") {
        out.cov.topLeftCorner(n, n) = omega_inv;
        out.cov.block(n, n, n, n) = shrink * params.mass();
    } else if (scheme.word == "OBABO" || scheme.word == "OABAO") {
        out.cov.topLeftCorner(n, n) = shrink * omega_inv;
        out.cov.block(n, n, n, n) = params.mass();
    } else {
        throw UnsupportedError("analytic invariant covariance: unsupported scheme " + scheme.name());
    }
    out.cov.bottomRightCorner(m, m) = params.q_aux();
    out.cov /= params.beta();
    return out;
}

CovarianceResult numeric_stationary_cov(const SchemeSpec& scheme, const Matrix& omega,
                                        const GleParams& params, double h,
                                        const BaselineSpec* baseline) {
    const LinearStepMatrices step = linear_step(scheme, omega, params, h, baseline);
    CovarianceResult out;
    out.cov = solve_discrete_lyapunov(step.mean_map, step.noise_cov, 1e-9);
    out.mean = Vector::Zero(step.mean_map.rows());
    return out;
}

double chain_spectral_radius(const SchemeSpec& scheme, const Matrix& omega,
                             const GleParams& params, double h, const BaselineSpec* baseline) {
    return spectral_radius(linear_step(scheme, omega, params, h, baseline).mean_map);
}

double stability_threshold(const SchemeSpec& scheme, const Matrix& omega,
                           const GleParams& params, double h_max, const BaselineSpec* baseline) {
    constexpr double kEdge = 1.0 - 1e-9;
    auto unstable = [&](double h) {
        const double rho = chain_spectral_radius(scheme, omega, params, h, baseline);
        return !(rho < kEdge);
    };
    const int grid = 200;
    double lo = 0.0;
    for (int i = 1; i <= grid; ++i) {
        const double h = h_max * i / grid;
        if (unstable(h)) {
            double hi = h;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= 0.0) break;
                (unstable(mid) ? hi : lo) = mid;
            }
            return hi;
        }
        lo = h;
    }
    return h_max;
}

double limit_gap(const RescaleSpec& spec, LimitMode mode, double eps, double h) {
    if (!(eps > 0.0) || !(h > 0.0)) throw DomainError("limit_gap: eps and h must be positive");
    RescaleSpec scaled = spec;
    scaled.mu1 = 1.0 / eps;
    scaled.mu2 = mode == LimitMode::WhiteNoise ? 1.0 / (eps * eps) : 1.0 / eps;
    const GleParams params = from_rescale_spec(scaled, 1.0);
    const Matrix f = expm(-h * params.gamma());
    if (mode == LimitMode::Overdamped) return max_abs(f);
    const Eigen::Index n = spec.d_a.size();
    Matrix target = Matrix::Zero(2 * n, 2 * n);
    const Vector rate = spec.d_a.cwiseAbs2().cwiseQuotient(spec.d_b);
    target.topLeftCorner(n, n) = expm(-h * Matrix(rate.asDiagonal()));
    return max_abs(f - target);
}

}  // namespace glelab
