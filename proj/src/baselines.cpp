#include "baselines.hpp"

#include <cmath>

#include "glelab/errors.hpp"

namespace glelab::detail {

namespace {

bool spd(const Matrix& a, Eigen::Index n) {
    if (a.rows() != n || a.cols() != n || !a.allFinite()) return false;
    if (max_abs(a - a.transpose()) > 1e-12 * std::max(1.0, max_abs(a))) return false;
    return Eigen::LLT<Matrix>(a).info() == Eigen::Success;
}

// Underdamped Langevin BAOAB with scalar-or-matrix friction Γ̂.
class LdBaoab final : public Stepper {
public:
    LdBaoab(const GleParams& params, const Potential& potential, double h,
            std::unique_ptr<NoiseSource> noise, const Matrix& friction)
        : Stepper(std::move(noise)), potential_(potential), minv_(params.mass_inv()), h_(h) {
        const Eigen::Index n = params.n();
        if (!spd(friction, n)) throw ValidationError("LD-BAOAB: friction must be n×n SPD");
        f_ = expm(-h * friction * minv_);
        Matrix c = (params.mass() - f_ * params.mass() * f_.transpose()) / params.beta();
        c = 0.5 * (c + c.transpose());
        s_ = psd_factor(c, 1e-12 * std::max(1.0, max_abs(params.mass()) / params.beta()));
        grad_.resize(n);
        grad_q_.resize(n);
        r_.resize(n);
        tmp_.resize(n);
        m_ = params.m();
    }

    void step(ExtendedState& x) override {
        const double half = 0.5 * h_;
        x.p.noalias() -= half * gradient(x.q);
        tmp_.noalias() = minv_ * x.p;
        x.q.noalias() += half * tmp_;
        noise_->fill(r_);
        tmp_.noalias() = f_ * x.p;
        tmp_.noalias() += s_.triangularView<Eigen::Lower>() * r_;
        x.p = tmp_;
        tmp_.noalias() = minv_ * x.p;
        x.q.noalias() += half * tmp_;
        x.p.noalias() -= half * gradient(x.q);
    }

    double time_step() const override { return h_; }
    int aux_dim() const override { return m_; }
    std::string label() const override { return "LD-BAOAB"; }

private:
    const Vector& gradient(const Vector& q) {
        if (!valid_ || q != grad_q_) {
            potential_.gradient(q, grad_);
            grad_q_ = q;
            valid_ = true;
        }
        return grad_;
    }

    Potential potential_;
    Matrix minv_, f_, s_;
    double h_;
    int m_ = 0;
    Vector grad_, grad_q_, r_, tmp_;
    bool valid_ = false;
};

// Leimkuhler–Matthews update with the noise increment averaged over two
// consecutive draws; the later draw is kept for the next step.
class BaoabLimit final : public Stepper {
public:
    BaoabLimit(const GleParams& params, const Potential& potential, double h_tilde,
               std::unique_ptr<NoiseSource> noise, const Matrix& mobility)
        : Stepper(std::move(noise)), potential_(potential), ht_(h_tilde) {
        const Eigen::Index n = params.n();
        if (!spd(mobility, n)) throw ValidationError("BAOAB-LIMIT: mobility must be n×n SPD");
        if (!(h_tilde > 0.0)) throw DomainError("BAOAB-LIMIT: h_tilde must be positive");
        drift_ = h_tilde * mobility;
        diffusion_ = spd_sqrt(2.0 * h_tilde * mobility / params.beta());
        prev_.resize(n);
        next_.resize(n);
        grad_.resize(n);
        tmp_.resize(n);
        noise_->fill(prev_);
        m_ = params.m();
    }

    void step(ExtendedState& x) override {
        noise_->fill(next_);
        potential_.gradient(x.q, grad_);
        x.q.noalias() -= drift_ * grad_;
        tmp_ = 0.5 * (prev_ + next_);
        x.q.noalias() += diffusion_ * tmp_;
        prev_.swap(next_);
    }

    double time_step() const override { return ht_; }
    int aux_dim() const override { return m_; }
    std::string label() const override { return "BAOAB-LIMIT"; }

private:
    Potential potential_;
    double ht_;
    int m_ = 0;
    Matrix drift_, diffusion_;
    Vector prev_, next_, grad_, tmp_;
};

// Extended-variable schemes for Prony kernels K(t) = Σ c_k/τ_k e^{−t/τ_k},
// one auxiliary variable per (coordinate, term), index i·K + k.
class BbStepper final : public Stepper {
public:
    BbStepper(bool bacocab, const GleParams& params, const Potential& potential, double h,
              std::unique_ptr<NoiseSource> noise, const std::vector<BbTerm>& terms)
        : Stepper(std::move(noise)),
          bacocab_(bacocab),
          potential_(potential),
          minv_(params.mass_inv()),
          h_(h),
          n_(params.n()),
          k_(static_cast<int>(terms.size())) {
        if (terms.empty()) throw ValidationError("BB schemes: at least one Prony term required");
        for (const auto& t : terms) {
            if (!(t.tau > 0.0) || !(t.c > 0.0)) {
                throw ValidationError("BB schemes: terms need c > 0 and tau > 0");
            }
            const double theta = bb_theta(h, t.tau);
            theta_.push_back(theta);
            drag_.push_back((1.0 - theta) * t.c);
            kick_.push_back(bb_alpha(h, t.tau) * std::sqrt(2.0 * t.c / params.beta()));
        }
        grad_.resize(n_);
        grad_q_.resize(n_);
        v_.resize(n_);
        r_.resize(n_ * k_);
        force_.resize(n_);
    }

    void step(ExtendedState& x) override {
        const double half = 0.5 * h_;
        if (!bacocab_) {
            aux_force(x.s);
            x.p.noalias() += half * (force_ - gradient(x.q));
            v_.noalias() = minv_ * x.p;
            x.q.noalias() += h_ * v_;
            relax(x.s);
            aux_force(x.s);
            x.p.noalias() += half * (force_ - gradient(x.q));
            return;
        }
        x.p.noalias() -= half * gradient(x.q);
        v_.noalias() = minv_ * x.p;
        x.q.noalias() += half * v_;
        aux_force(x.s);
        x.p.noalias() += half * force_;
        v_.noalias() = minv_ * x.p;
        relax(x.s);
        aux_force(x.s);
        x.p.noalias() += half * force_;
        v_.noalias() = minv_ * x.p;
        x.q.noalias() += half * v_;
        x.p.noalias() -= half * gradient(x.q);
    }

    double time_step() const override { return h_; }
    int aux_dim() const override { return n_ * k_; }
    std::string label() const override { return bacocab_ ? "BB-BACOCAB" : "BB-BAOB"; }

private:
    void aux_force(const Vector& s) {
        for (int i = 0; i < n_; ++i) force_(i) = s.segment(i * k_, k_).sum();
    }

    // s_k ← θ_k s_k − (1−θ_k) c_k v + α_k √(2β⁻¹c_k) R, with v = M⁻¹p already in v_.
    void relax(Vector& s) {
        noise_->fill(r_);
        for (int i = 0; i < n_; ++i) {
            for (int k = 0; k < k_; ++k) {
                const int idx = i * k_ + k;
                s(idx) = theta_[k] * s(idx) - drag_[k] * v_(i) + kick_[k] * r_(idx);
            }
        }
    }

    const Vector& gradient(const Vector& q) {
        if (!valid_ || q != grad_q_) {
            potential_.gradient(q, grad_);
            grad_q_ = q;
            valid_ = true;
        }
        return grad_;
    }

    bool bacocab_;
    Potential potential_;
    Matrix minv_;
    double h_;
    int n_, k_;
    std::vector<double> theta_, drag_, kick_;
    Vector grad_, grad_q_, v_, r_, force_;
    bool valid_ = false;
};

}  // namespace

std::unique_ptr<Stepper> make_baseline(const SchemeSpec& scheme, const GleParams& params,
                                       const Potential& potential, double h,
                                       std::unique_ptr<NoiseSource> noise,
                                       const BaselineSpec& baseline) {
    if (potential.dim() != params.n()) {
        throw DimensionError("integrator: potential dimension differs from n");
    }
    if (!(h > 0.0)) throw DomainError("integrator: h must be positive");
    switch (scheme.kind) {
        case SchemeKind::LdBaoab:
            return std::make_unique<LdBaoab>(params, potential, h, std::move(noise),
                                             baseline.friction);
        case SchemeKind::BaoabLimit:
            return std::make_unique<BaoabLimit>(params, potential,
                                                baseline.h_tilde > 0.0 ? baseline.h_tilde : h,
                                                std::move(noise), baseline.mobility);
        case SchemeKind::BbBaob:
            return std::make_unique<BbStepper>(false, params, potential, h, std::move(noise),
                                               baseline.prony_terms);
        case SchemeKind::BbBacocab:
            return std::make_unique<BbStepper>(true, params, potential, h, std::move(noise),
                                               baseline.prony_terms);
        default:
            throw SchemeError("not a baseline scheme: " + scheme.name());
    }
}

}  // namespace glelab::detail
