#include "glelab/integrators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "baselines.hpp"
#include "glelab/errors.hpp"

namespace glelab {

OStepCache make_ostep(const GleParams& params, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("make_ostep: h must be positive");
    OStepCache cache;
    cache.h = h;
    cache.f = expm(-h * params.gamma_m());
    const Matrix d = params.z_covariance();
    Matrix c = d - cache.f * d * cache.f.transpose();
    c = 0.5 * (c + c.transpose());
    cache.s_factor = psd_factor(c, 1e-12 * std::max(1.0, max_abs(d)));
    return cache;
}

SStepCache make_sstep(const GleParams& params, double h) {
    SStepCache cache;
    cache.o = make_ostep(params, h);
    const Matrix gm = params.gamma_m();
    Eigen::FullPivLU<Matrix> lu(gm);
    if (!lu.isInvertible()) throw NumericalError("S-step: Γ_M is singular");
    const Eigen::Index dim = gm.rows();
    const Matrix rhs = (Matrix::Identity(dim, dim) - cache.o.f).leftCols(params.n());
    cache.drift = lu.solve(rhs);
    return cache;
}

void step_A(ExtendedState& x, double h, const GleParams& params) {
    x.q.noalias() += h * (params.mass_inv() * x.p);
}

void step_B(ExtendedState& x, double h, const Potential& potential) {
    x.p.noalias() -= h * potential.gradient(x.q);
}

namespace {

Vector join(const ExtendedState& x) {
    Vector z(x.p.size() + x.s.size());
    z << x.p, x.s;
    return z;
}

void split(const Vector& z, ExtendedState& x) {
    x.p = z.head(x.p.size());
    x.s = z.tail(x.s.size());
}

}  // namespace

void step_O(ExtendedState& x, const OStepCache& cache, NoiseSource& noise) {
    const Vector z = join(x);
    Vector r(z.size());
    noise.fill(r);
    split(cache.f * z + cache.s_factor * r, x);
}

void step_S(ExtendedState& x, const SStepCache& cache, const Potential& potential,
            NoiseSource& noise) {
    const Vector z = join(x);
    Vector r(z.size());
    noise.fill(r);
    const Vector grad = potential.gradient(x.q);
    split(cache.o.f * z + cache.o.s_factor * r - cache.drift * grad, x);
}

std::string SchemeSpec::name() const {
    switch (kind) {
        case SchemeKind::Palindrome: return word;
        case SchemeKind::Asa: return "ASA";
        case SchemeKind::Sas: return "SAS";
        case SchemeKind::LdBaoab: return "LD-BAOAB";
        case SchemeKind::BaoabLimit: return "BAOAB-LIMIT";
        case SchemeKind::BbBaob: return "BB-BAOB";
        case SchemeKind::BbBacocab: return "BB-BACOCAB";
    }
    return word;
}

SchemeSpec parse_scheme(const std::string& text) {
    std::string up;
    for (char c : text) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up.rfind("GLE-", 0) == 0) up = up.substr(4);
    SchemeSpec spec;
    if (up == "ASA") spec.kind = SchemeKind::Asa;
    else if (up == "SAS") spec.kind = SchemeKind::Sas;
    else if (up == "LD-BAOAB") spec.kind = SchemeKind::LdBaoab;
    else if (up == "BAOAB-LIMIT") spec.kind = SchemeKind::BaoabLimit;
    else if (up == "BB-BAOB") spec.kind = SchemeKind::BbBaob;
    else if (up == "BB-BACOCAB") spec.kind = SchemeKind::BbBacocab;
    else {
        const bool letters = up.size() == 5 && std::all_of(up.begin(), up.end(), [](char c) {
                                 return c == 'A' || c == 'B' || c == 'O';
                             });
        if (!letters || up[0] != up[4] || up[1] != up[3] || up[0] == up[1] || up[1] == up[2] ||
            up[0] == up[2]) {
            throw SchemeError("unknown scheme '" + text +
                              "': expected a palindrome XYZYX of distinct letters A, B, O or a "
                              "named baseline");
        }
        spec.kind = SchemeKind::Palindrome;
    }
    spec.word = up;
    return spec;
}

std::vector<BbTerm> bb_terms_from_prony(const std::vector<PronyTerm>& terms) {
    std::vector<BbTerm> out;
    for (const auto& t : terms) {
        if (t.b != 0.0) throw UnsupportedError("BB schemes need non-oscillatory Prony terms (b = 0)");
        if (!(t.a > 0.0) || !(t.c > 0.0)) throw ValidationError("prony: terms need c > 0, a > 0");
        out.push_back({t.c / t.a, 1.0 / t.a});
    }
    return out;
}

double bb_theta(double h, double tau) { return std::exp(-h / tau); }

double bb_alpha(double h, double tau) {
    const double one_minus = 1.0 - bb_theta(h, tau);
    return std::sqrt(one_minus * one_minus / h);
}

namespace {

class SplittingStepper final : public Stepper {
public:
    SplittingStepper(const SchemeSpec& scheme, const GleParams& params, const Potential& potential,
                     double h, std::unique_ptr<NoiseSource> noise)
        : Stepper(std::move(noise)), params_(params), potential_(potential), h_(h), name_(scheme.name()) {
        if (potential.dim() != params.n()) {
            throw DimensionError("integrator: potential dimension differs from n");
        }
        if (!(h > 0.0)) throw DomainError("integrator: h must be positive");
        switch (scheme.kind) {
            case SchemeKind::Palindrome: {
                const std::string& w = scheme.word;
                const double frac[5] = {0.5, 0.5, 1.0, 0.5, 0.5};
                for (int i = 0; i < 5; ++i) add(w[i], frac[i] * h);
                break;
            }
            case SchemeKind::Asa:
                add('A', 0.5 * h);
                add('S', h);
                add('A', 0.5 * h);
                break;
            case SchemeKind::Sas:
                add('S', 0.5 * h);
                add('A', h);
                add('S', 0.5 * h);
                break;
            default:
                throw SchemeError("splitting stepper: not a splitting scheme");
        }
        const int n = params.n();
        const int dim = params.dim_z();
        z_.resize(dim);
        znew_.resize(dim);
        r_.resize(dim);
        grad_.resize(n);
        grad_q_.resize(n);
        tmp_.resize(n);
    }

    void step(ExtendedState& x) override {
        for (const Op& op : ops_) {
            switch (op.kind) {
                case 'A':
                    tmp_.noalias() = params_.mass_inv() * x.p;
                    x.q.noalias() += op.t * tmp_;
                    break;
                case 'B':
                    x.p.noalias() -= op.t * gradient(x.q);
                    break;
                case 'O': {
                    const OStepCache& c = ocache_[op.cache];
                    load(x);
                    noise_->fill(r_);
                    znew_.noalias() = c.f * z_;
                    znew_.noalias() += c.s_factor.triangularView<Eigen::Lower>() * r_;
                    store(x);
                    break;
                }
                case 'S': {
                    const SStepCache& c = scache_[op.cache];
                    load(x);
                    noise_->fill(r_);
                    znew_.noalias() = c.o.f * z_;
                    znew_.noalias() += c.o.s_factor.triangularView<Eigen::Lower>() * r_;
                    znew_.noalias() -= c.drift * gradient(x.q);
                    store(x);
                    break;
                }
            }
        }
    }

    double time_step() const override { return h_; }
    int aux_dim() const override { return params_.m(); }
    std::string label() const override { return name_; }

private:
    struct Op {
        char kind;
        double t;
        std::size_t cache;
    };

    void add(char kind, double t) {
        Op op{kind, t, 0};
        if (kind == 'O') {
            auto it = std::find_if(ocache_.begin(), ocache_.end(),
                                   [t](const OStepCache& c) { return c.h == t; });
            if (it == ocache_.end()) {
                ocache_.push_back(make_ostep(params_, t));
                it = ocache_.end() - 1;
            }
            op.cache = static_cast<std::size_t>(it - ocache_.begin());
        } else if (kind == 'S') {
            auto it = std::find_if(scache_.begin(), scache_.end(),
                                   [t](const SStepCache& c) { return c.o.h == t; });
            if (it == scache_.end()) {
                scache_.push_back(make_sstep(params_, t));
                it = scache_.end() - 1;
            }
            op.cache = static_cast<std::size_t>(it - scache_.begin());
        }
        ops_.push_back(op);
    }

    const Vector& gradient(const Vector& q) {
        if (!grad_valid_ || q != grad_q_) {
            potential_.gradient(q, grad_);
            grad_q_ = q;
            grad_valid_ = true;
        }
        return grad_;
    }

    void load(const ExtendedState& x) {
        const Eigen::Index n = x.p.size();
        z_.head(n) = x.p;
        z_.tail(z_.size() - n) = x.s;
    }

    void store(ExtendedState& x) const {
        const Eigen::Index n = x.p.size();
        x.p = znew_.head(n);
        x.s = znew_.tail(znew_.size() - n);
    }

    GleParams params_;
    Potential potential_;
    double h_;
    std::string name_;
    std::vector<Op> ops_;
    std::vector<OStepCache> ocache_;
    std::vector<SStepCache> scache_;
    Vector z_, znew_, r_, grad_, grad_q_, tmp_;
    bool grad_valid_ = false;
};

}  // namespace

std::unique_ptr<Stepper> build_integrator(const SchemeSpec& scheme, const GleParams& params,
                                          const Potential& potential, double h,
                                          std::unique_ptr<NoiseSource> noise,
                                          const BaselineSpec* baseline) {
    if (!noise) throw Error("integrator: a noise source is required");
    switch (scheme.kind) {
        case SchemeKind::Palindrome: {
            const SchemeSpec checked = parse_scheme(scheme.word);
            return std::make_unique<SplittingStepper>(checked, params, potential, h,
                                                      std::move(noise));
        }
        case SchemeKind::Asa:
        case SchemeKind::Sas:
            return std::make_unique<SplittingStepper>(scheme, params, potential, h,
                                                      std::move(noise));
        case SchemeKind::LdBaoab:
        case SchemeKind::BaoabLimit:
        case SchemeKind::BbBaob:
        case SchemeKind::BbBacocab:
            if (!baseline) throw SchemeError(scheme.name() + ": baseline data required");
            return detail::make_baseline(scheme, params, potential, h, std::move(noise), *baseline);
    }
    throw SchemeError("unknown scheme kind");
}

}  // namespace glelab
