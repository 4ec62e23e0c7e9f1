#pragma once

#include <memory>
#include <string>
#include <vector>

#include "glelab/kernel.hpp"
#include "glelab/matfun.hpp"
#include "glelab/noise.hpp"
#include "glelab/potentials.hpp"

namespace glelab {

struct ExtendedState {
    Vector q;
    Vector p;
    Vector s;
};

// Exact OU update of z = (p, s) over a step h: z ← F z + S R.
struct OStepCache {
    double h = 0.0;
    Matrix f;
    Matrix s_factor;
};

OStepCache make_ostep(const GleParams& params, double h);

// S-step data: the O-step cache plus the force response Γ_M⁻¹(I − F)[:, :n].
struct SStepCache {
    OStepCache o;
    Matrix drift;
};

SStepCache make_sstep(const GleParams& params, double h);

void step_A(ExtendedState& x, double h, const GleParams& params);
void step_B(ExtendedState& x, double h, const Potential& potential);
void step_O(ExtendedState& x, const OStepCache& cache, NoiseSource& noise);
void step_S(ExtendedState& x, const SStepCache& cache, const Potential& potential,
            NoiseSource& noise);

enum class SchemeKind { Palindrome, Asa, Sas, LdBaoab, BaoabLimit, BbBaob, BbBacocab };

struct SchemeSpec {
    SchemeKind kind = SchemeKind::Palindrome;
    std::string word;  // five letters for palindromes, e.g. "BAOAB"

    std::string name() const;
};

// Accepts "BAOAB", "ABOBA", "OBABO", "OABAO" (or any XYZYX word over {A,B,O}
// with distinct letters), "ASA", "SAS", "LD-BAOAB", "BAOAB-LIMIT", "BB-BAOB",
// "BB-BACOCAB". Case-insensitive; optional "gle-" prefix.
SchemeSpec parse_scheme(const std::string& text);

struct BbTerm {
    double c = 0.0;
    double tau = 0.0;
};

// Prony terms with b = 0 mapped onto K(t) = Σ c_k/τ_k e^{−t/τ_k}.
std::vector<BbTerm> bb_terms_from_prony(const std::vector<PronyTerm>& terms);

struct BaselineSpec {
    Matrix friction;          // ld-BAOAB Γ̂
    Matrix mobility;          // BAOAB-limit Λ
    double h_tilde = 0.0;     // BAOAB-limit effective step (0: use h)
    std::vector<BbTerm> prony_terms;
};

class Stepper {
public:
    explicit Stepper(std::unique_ptr<NoiseSource> noise) : noise_(std::move(noise)) {}
    virtual ~Stepper() = default;
    Stepper(const Stepper&) = delete;
    Stepper& operator=(const Stepper&) = delete;

    virtual void step(ExtendedState& x) = 0;
    // Physical time advanced by one step.
    virtual double time_step() const = 0;
    // Length of the auxiliary vector s the scheme works on.
    virtual int aux_dim() const = 0;
    virtual std::string label() const = 0;

    NoiseSource& noise() { return *noise_; }

protected:
    std::unique_ptr<NoiseSource> noise_;
};

std::unique_ptr<Stepper> build_integrator(const SchemeSpec& scheme, const GleParams& params,
                                          const Potential& potential, double h,
                                          std::unique_ptr<NoiseSource> noise,
                                          const BaselineSpec* baseline = nullptr);

// θ = e^{−h/τ} and α = √((1−θ)²/h) of the BB schemes.
double bb_theta(double h, double tau);
double bb_alpha(double h, double tau);

}  // namespace glelab
