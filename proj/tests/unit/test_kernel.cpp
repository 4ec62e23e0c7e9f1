#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "glelab/errors.hpp"
#include "glelab/kernel.hpp"

using namespace glelab;
using Catch::Approx;

namespace {

const Matrix kOne = Matrix::Identity(1, 1);

double series(const std::vector<PronyTerm>& terms, double t) {
    double sum = 0.0;
    for (const auto& term : terms) sum += term.c * std::exp(-term.a * t) * std::cos(term.b * t);
    return sum;
}

}  // namespace

TEST_CASE("single Prony term") {
    const GleParams p = from_prony({{1.0, 1.0, 0.0}}, 1, kOne, 1.0);
    CHECK(p.m() == 1);
    CHECK(p.gamma12()(0, 0) == Approx(1.0));
    CHECK(p.gamma21()(0, 0) == Approx(-1.0));
    CHECK(p.gamma22()(0, 0) == Approx(1.0));
    CHECK(kernel_eval(p, 0.0).smooth(0, 0) == Approx(1.0));
    const ValidationReport r = validate(p);
    CHECK(r.stable);
    // Γ = [[0, 1], [−1, 1]] has eigenvalues (1 ± i√3)/2.
    CHECK(r.min_real_eigenvalue == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("benchmark kernel r = 0") {
    const auto terms = benchmark_prony_terms(0);
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].c == 2.5);
    CHECK(terms[0].a == 0.25);
    CHECK(terms[1].c == 0.5);
    CHECK(terms[1].a == 0.125);
    const GleParams p = from_prony(terms, 1, kOne, 1.0);
    CHECK(kernel_eval(p, 0.0).smooth(0, 0) == Approx(3.0).epsilon(1e-14));
    CHECK(kernel_eval(p, 4.0).smooth(0, 0) ==
          Approx(2.5 * std::exp(-1.0) + 0.5 * std::exp(-0.5)).epsilon(1e-13));
    CHECK(kernel_eval(p, 4.0).smooth(0, 0) == Approx(1.222964).margin(1e-6));
    const auto scaled = benchmark_prony_terms(2);
    CHECK(scaled[0].c == 10.0);
    CHECK(scaled[0].a == 1.0);
}

TEST_CASE("kernel_eval closed forms") {
    const GleParams single = from_prony({{2.0, 0.5, 0.0}}, 1, kOne, 1.0);
    CHECK(kernel_eval(single, 2.0).smooth(0, 0) == Approx(2.0 * std::exp(-1.0)).epsilon(1e-13));
    const GleParams osc = from_prony({{1.0, 1.0, 3.0}}, 1, kOne, 1.0);
    CHECK(osc.m() == 2);
    CHECK(kernel_eval(osc, 1.0).smooth(0, 0) == Approx(std::exp(-1.0) * std::cos(3.0)).epsilon(1e-13));
    CHECK(kernel_eval(osc, 1.0).smooth(0, 0) == Approx(-0.364198).margin(1e-6));
    const KernelValue at0 = kernel_eval(osc, 0.0);
    CHECK(max_abs(at0.smooth + osc.gamma12() * osc.gamma21()) < 1e-15);
    CHECK_THROWS_AS(kernel_eval(osc, -1e-3), DomainError);
}

TEST_CASE("Prony reconstruction on random term lists") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> uc(0.1, 5.0), ua(0.05, 4.0), ub(0.0, 6.0);
    std::uniform_int_distribution<int> count(1, 4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PronyTerm> terms(count(rng));
        for (auto& t : terms) t = {uc(rng), ua(rng), trial % 2 ? ub(rng) : 0.0};
        const int n = 1 + trial % 3;
        const GleParams p = from_prony(terms, n, Matrix::Identity(n, n), 1.0);
        double worst = 0.0;
        for (int k = 0; k <= 100; ++k) {
            const double t = 0.1 * k;
            const Matrix s = kernel_eval(p, t).smooth;
            worst = std::max(worst, max_abs(s - series(terms, t) * Matrix::Identity(n, n)));
        }
        CHECK(worst <= 1e-10);
        // Class (i): Γ₁,₂Q = −Γ₂,₁ᵀ and Γ₁,₁ = 0.
        CHECK(max_abs(p.gamma12() * p.q_aux() + p.gamma21().transpose()) == 0.0);
        CHECK(max_abs(p.gamma11()) == 0.0);
        const ValidationReport r = validate(p);
        CHECK(r.stable);
        CHECK(r.controllable);
        REQUIRE(r.fdt_residual.has_value());
        CHECK(*r.fdt_residual < 1e-10);
    }
}

TEST_CASE("invalid Prony terms are rejected") {
    CHECK_THROWS_AS(from_prony({}, 1, kOne, 1.0), ValidationError);
    CHECK_THROWS_AS(from_prony({{-1.0, 1.0, 0.0}}, 1, kOne, 1.0), ValidationError);
    CHECK_THROWS_AS(from_prony({{1.0, 0.0, 0.0}}, 1, kOne, 1.0), ValidationError);
    CHECK_THROWS_AS(from_prony({{1.0, 1.0, -1.0}}, 1, kOne, 1.0), ValidationError);
    CHECK_THROWS_AS(from_prony({{1.0, 1.0, 0.0}}, 1, kOne, 0.0), ValidationError);
}

TEST_CASE("exponential kernel builders") {
    const GleParams e = from_exp_kernel({1.0, 1.0, 0.0}, 1, kOne, 1.0);
    CHECK(kernel_eval(e, 0.0).smooth(0, 0) == Approx(1.0));
    CHECK(kernel_eval(e, 0.7).smooth(0, 0) == Approx(std::exp(-0.7)).epsilon(1e-14));
    CHECK(max_abs(e.gamma12() * e.q_aux() + e.gamma21().transpose()) == 0.0);

    const GleParams fast = from_exp_kernel({128.0, 1.0 / 16.0, 0.0}, 1, kOne, 1.0);
    CHECK(kernel_eval(fast, 0.0).smooth(0, 0) == Approx(128.0).epsilon(1e-14));
    CHECK(kernel_eval(fast, 0.1).smooth(0, 0) == Approx(128.0 * std::exp(-1.6)).epsilon(1e-13));

    const GleParams wu = from_exp_kernel({1.0, 2.0, 0.5}, 1, kOne, 1.0);
    const KernelValue kv = kernel_eval(wu, 0.0);
    CHECK(kv.markovian(0, 0) == Approx(1.0));
    // −Γ₁,₂Γ₂,₁ with Γ₁,₂ = Γ₂,₁ = √(λγ/τ).
    CHECK(kv.smooth(0, 0) == Approx(-0.25).epsilon(1e-14));
    CHECK(kernel_eval(wu, 1.0).smooth(0, 0) == Approx(-0.25 * std::exp(-0.5)).epsilon(1e-13));

    CHECK_THROWS_AS(from_exp_kernel({1.0, 1.0, 1.0}, 1, kOne, 1.0), ValidationError);
    CHECK_THROWS_AS(from_exp_kernel({1.0, -1.0, 0.0}, 1, kOne, 1.0), ValidationError);
    CHECK_THROWS_AS(from_exp_kernel({0.0, 1.0, 0.0}, 1, kOne, 1.0), ValidationError);
}

TEST_CASE("class (ii) kernel has Q = I as its fluctuation-dissipation solution") {
    const GleParams wu = from_exp_kernel({1.0, 1.0, 0.5}, 1, kOne, 1.0);
    const ValidationReport r = validate(wu);
    CHECK(r.stable);
    REQUIRE(r.fdt_q.has_value());
    CHECK(max_abs(*r.fdt_q - Matrix::Identity(1, 1)) < 1e-12);
    REQUIRE(r.fdt_residual.has_value());
    CHECK(*r.fdt_residual < 1e-12);
}

TEST_CASE("unstable auxiliary block is reported") {
    const GleParams bad(kOne, Matrix::Zero(1, 1), kOne, -kOne, -kOne, kOne, 1.0);
    const ValidationReport r = validate(bad);
    CHECK_FALSE(r.stable);
    CHECK(r.min_real_eigenvalue < 0.0);
}

TEST_CASE("non-commuting friction and mass are measured") {
    Matrix mass(2, 2), g11(2, 2);
    mass << 2.0, 0.0, 0.0, 1.0;
    g11 << 1.0, 0.5, 0.5, 1.0;
    const GleParams p(mass, g11, Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                      Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0);
    CHECK(validate(p).commutation_residual == Approx(max_abs(g11 * mass - mass * g11)));
}

TEST_CASE("rescale") {
    RescaleSpec unit{1.0, 1.0, Vector::Ones(1), Vector::Ones(1)};
    const GleParams base = from_rescale_spec(unit, 1.0);
    const GleParams same = rescale(base, 1.0, 1.0);
    CHECK(max_abs(same.gamma_m() - base.gamma_m()) == 0.0);

    const GleParams white = rescale(base, 10.0, 100.0);
    Matrix expect(2, 2);
    expect << 0.0, -10.0, 10.0, 100.0;
    CHECK(max_abs(white.gamma_m() - expect) < 1e-12);

    RescaleSpec two{1.0, 1.0, Vector::Constant(1, 2.0), Vector::Ones(1)};
    const GleParams od = rescale(from_rescale_spec(two, 1.0), 2.0, 2.0);
    expect << 0.0, -4.0, 4.0, 2.0;
    CHECK(max_abs(od.gamma_m() - expect) < 1e-12);

    RescaleSpec diag{1.0, 1.0, Vector::LinSpaced(2, 0.5, 1.5), Vector::LinSpaced(2, 2.0, 3.0)};
    const GleParams orig = from_rescale_spec(diag, 1.0);
    const double mu1 = 3.0, mu2 = 7.0;
    const GleParams resc = rescale(orig, mu1, mu2);
    for (double t : {0.0, 0.05, 0.3, 1.0}) {
        const Matrix lhs = kernel_eval(resc, t).smooth;
        const Matrix rhs = mu1 * mu1 * kernel_eval(orig, mu2 * t).smooth;
        CHECK(max_abs(lhs - rhs) < 1e-10);
    }
    CHECK_THROWS_AS(rescale(builtin_kv_8_8(1, 1.0), 2.0, 2.0), UnsupportedError);
}

TEST_CASE("built-in kv_8_8") {
    const GleParams k1 = builtin_kv_8_8(1, 1.0);
    CHECK(k1.m() == 8);
    CHECK(k1.gamma11()(0, 0) == Approx(13.36001).epsilon(1e-12));
    const ValidationReport r = validate(k1);
    CHECK(r.stable);
    CHECK(r.controllable);
    const GleParams k9 = builtin_kv_8_8(9, 1.0);
    CHECK(k9.n() == 9);
    CHECK(k9.m() == 72);
    CHECK(validate(k9).stable);
}

TEST_CASE("kernel file round trip") {
    const GleParams k = builtin_kv_8_8(2, 0.7);
    const auto path = std::filesystem::temp_directory_path() / "glelab_kv_roundtrip.kernel";
    save_kernel_file(k, path.string());
    const GleParams back = load_kernel_file(path.string());
    std::filesystem::remove(path);
    CHECK(back.beta() == k.beta());
    CHECK(max_abs(back.gamma11() - k.gamma11()) <= 1e-15);
    CHECK(max_abs(back.gamma12() - k.gamma12()) <= 1e-15);
    CHECK(max_abs(back.gamma21() - k.gamma21()) <= 1e-15);
    CHECK(max_abs(back.gamma22() - k.gamma22()) <= 1e-15);
    CHECK(max_abs(back.q_aux() - k.q_aux()) <= 1e-15);
    CHECK(max_abs(back.mass() - k.mass()) <= 1e-15);
}

TEST_CASE("kernel file errors carry line numbers") {
    std::istringstream bad("[meta]\n1 1 1.0\n[mass]\n1\n[gamma11]\nzero\n");
    try {
        parse_kernel(bad);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 6);
    }
    std::istringstream shape(
        "[meta]\n1 1 1\n[mass]\n1\n[gamma11]\n0\n[gamma12]\n1 2\n[gamma21]\n-1\n[gamma22]\n1\n[q]\n1\n");
    CHECK_THROWS_AS(parse_kernel(shape), ValidationError);
    std::istringstream ok(
        "# comment\n[meta]\n1 1 1  # n m beta\n[mass]\n1\n[gamma11]\n0\n[gamma12]\n1\n[gamma21]\n-1\n"
        "[gamma22]\n2\n[q]\n1\n");
    const GleParams p = parse_kernel(ok);
    CHECK(p.gamma22()(0, 0) == 2.0);
}
