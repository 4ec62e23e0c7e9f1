#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "glelab/errors.hpp"
#include "glelab/integrators.hpp"
#include "glelab/theory.hpp"

using namespace glelab;
using Catch::Approx;

namespace {

const Matrix kOne = Matrix::Identity(1, 1);

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

// Scalar OU in p with friction γ; the auxiliary variable is decoupled.
GleParams scalar_ou(double gamma) {
    return GleParams(kOne, scalar(gamma), scalar(0.0), scalar(0.0), kOne, kOne, 1.0);
}

GleParams frictionless() {
    return GleParams(kOne, scalar(0.0), scalar(0.0), scalar(0.0), scalar(0.0), kOne, 1.0);
}

Potential linear_potential(double slope) {
    return Potential(
        "linear", 1, [slope](const Vector& q) { return slope * q(0); },
        [slope](const Vector&, Vector& g) {
            g.resize(1);
            g(0) = slope;
        });
}

Potential zero_potential(int n) {
    return Potential(
        "zero", n, [](const Vector&) { return 0.0; },
        [n](const Vector&, Vector& g) { g = Vector::Zero(n); });
}

ExtendedState state(Vector q, Vector p, Vector s) { return {std::move(q), std::move(p), std::move(s)}; }

Matrix stationary_d(const GleParams& p) { return p.z_covariance(); }

// One-step affine map x ← E x + G r of a stepper on a quadratic target,
// read off column by column with scripted noise.
struct Extracted {
    Matrix e;
    Matrix c;
};

Extracted extract(const SchemeSpec& scheme, const GleParams& params, const Matrix& omega, double h,
                  const BaselineSpec* baseline, bool with_p, bool with_s) {
    const Potential pot = harmonic(omega);
    const int n = params.n();
    auto make = [&](std::vector<double> script) {
        return build_integrator(scheme, params, pot, h, std::make_unique<ScriptedNoise>(std::move(script)),
                                baseline);
    };
    // Count draws per step.
    std::size_t draws = 0;
    int aux = 0;
    {
        auto noise = std::make_unique<ScriptedNoise>(std::vector<double>(10000, 0.0));
        ScriptedNoise* raw = noise.get();
        auto st = build_integrator(scheme, params, pot, h, std::move(noise), baseline);
        aux = st->aux_dim();
        ExtendedState x = state(Vector::Zero(n), Vector::Zero(n), Vector::Zero(aux));
        const std::size_t before = raw->consumed();
        st->step(x);
        draws = raw->consumed() - before;
    }
    const int dim = n + (with_p ? n : 0) + (with_s ? aux : 0);
    auto pack = [&](const ExtendedState& x) {
        Vector v(dim);
        v.head(n) = x.q;
        int off = n;
        if (with_p) {
            v.segment(off, n) = x.p;
            off += n;
        }
        if (with_s) v.segment(off, aux) = x.s;
        return v;
    };
    auto unpack = [&](const Vector& v) {
        ExtendedState x = state(v.head(n), Vector::Zero(n), Vector::Zero(aux));
        int off = n;
        if (with_p) {
            x.p = v.segment(off, n);
            off += n;
        }
        if (with_s) x.s = v.segment(off, aux);
        return x;
    };
    Extracted out;
    out.e.resize(dim, dim);
    for (int j = 0; j < dim; ++j) {
        auto st = make(std::vector<double>(draws, 0.0));
        ExtendedState x = unpack(Vector::Unit(dim, j));
        st->step(x);
        out.e.col(j) = pack(x);
    }
    Matrix g(dim, static_cast<Eigen::Index>(draws));
    for (std::size_t j = 0; j < draws; ++j) {
        std::vector<double> script(draws, 0.0);
        script[j] = 1.0;
        auto st = make(script);
        ExtendedState x = unpack(Vector::Zero(dim));
        st->step(x);
        g.col(static_cast<Eigen::Index>(j)) = pack(x);
    }
    out.c = g * g.transpose();
    return out;
}

}  // namespace

TEST_CASE("O-step closed form for a scalar OU process") {
    const OStepCache c = make_ostep(scalar_ou(2.0), 0.5);
    CHECK(c.f(0, 0) == Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(c.s_factor(0, 0) == Approx(std::sqrt(1.0 - std::exp(-2.0))).epsilon(1e-13));
    CHECK(c.s_factor(0, 0) == Approx(0.929873).margin(1e-6));
    ExtendedState x = state(vec({0.0}), vec({2.0}), vec({0.0}));
    ZeroNoise zero;
    step_O(x, c, zero);
    CHECK(x.p(0) == Approx(2.0 * std::exp(-1.0)));
    const OStepCache big = make_ostep(scalar_ou(2.0), 50.0);
    ExtendedState y = state(vec({0.0}), vec({3.0}), vec({0.0}));
    step_O(y, big, zero);
    CHECK(std::abs(y.p(0)) < 1e-30);
}

TEST_CASE("O-step stationarity for benchmark kernels") {
    std::vector<GleParams> kernels{
        from_prony(benchmark_prony_terms(0), 1, kOne, 1.0),
        from_prony(benchmark_prony_terms(1), 1, kOne, 1.0),
        from_prony(benchmark_prony_terms(2), 1, kOne, 1.0),
        from_exp_kernel({128.0, 1.0 / 16.0, 0.0}, 1, kOne, 1.0),
        from_exp_kernel({1.0, 2.0, 0.5}, 2, Matrix::Identity(2, 2) * 3.0, 0.5),
        builtin_kv_8_8(1, 1.0),
    };
    for (const auto& p : kernels) {
        const Matrix d = stationary_d(p);
        for (double h : {1e-4, 0.01, 0.1, 1.0, 10.0}) {
            const OStepCache c = make_ostep(p, h);
            CHECK(max_abs(c.f * d * c.f.transpose() + c.s_factor * c.s_factor.transpose() - d) <= 1e-12);
            CHECK(max_abs(Matrix(c.s_factor.triangularView<Eigen::StrictlyUpper>())) == 0.0);
        }
    }
}

TEST_CASE("O-step noise vanishes like sqrt(h)") {
    const GleParams p = from_prony(benchmark_prony_terms(0), 1, kOne, 1.0);
    for (double h : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const OStepCache c = make_ostep(p, h);
        CHECK(max_abs(c.f - Matrix::Identity(3, 3)) < 10.0 * h);
        CHECK(c.s_factor.norm() <= std::sqrt(20.0 * h));
    }
}

TEST_CASE("O-step reproduces the stationary covariance in distribution") {
    const GleParams p = from_prony(benchmark_prony_terms(0), 1, kOne, 1.0);
    const OStepCache c = make_ostep(p, 0.3);
    const Matrix d = stationary_d(p);
    const Matrix root = psd_factor(d);
    GaussianNoise draw{42, 0};
    GaussianNoise step{42, 1};
    const int samples = 1000000;
    Matrix acc = Matrix::Zero(3, 3);
    ExtendedState x = state(vec({0.0}), vec({0.0}), Vector::Zero(2));
    Vector r(3), z(3);
    for (int i = 0; i < samples; ++i) {
        draw.fill(r);
        z = root * r;
        x.p = z.head(1);
        x.s = z.tail(2);
        step_O(x, c, step);
        z << x.p, x.s;
        acc += z * z.transpose();
    }
    acc /= samples;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double se = std::sqrt((d(i, i) * d(j, j) + d(i, j) * d(i, j)) / samples);
            CHECK(std::abs(acc(i, j) - d(i, j)) <= 4.0 * se);
        }
    }
}

TEST_CASE("A and B sub-steps") {
    const GleParams p = scalar_ou(1.0);
    ExtendedState x = state(vec({1.0}), vec({2.0}), vec({0.3}));
    step_A(x, 0.5, p);
    CHECK(x.q(0) == Approx(2.0));
    CHECK(x.p(0) == 2.0);
    CHECK(x.s(0) == 0.3);
    const Potential dw = double_well();
    ExtendedState y = state(vec({0.0}), vec({1.0}), vec({0.0}));
    step_B(y, 0.1, dw);
    CHECK(y.p(0) == Approx(1.0 - 0.2 * std::cos(0.25)).epsilon(1e-15));
    CHECK(y.p(0) == Approx(0.806218).margin(1e-6));
    ExtendedState z = state(vec({0.4}), vec({-1.0}), vec({0.0}));
    const ExtendedState z0 = z;
    step_B(z, 0.0, dw);
    step_A(z, 0.0, p);
    CHECK(z.q == z0.q);
    CHECK(z.p == z0.p);
}

TEST_CASE("S-step") {
    const GleParams p = from_prony(benchmark_prony_terms(0), 1, kOne, 1.0);
    const SStepCache sc = make_sstep(p, 0.4);
    ExtendedState a = state(vec({0.7}), vec({0.2}), vec({-0.1, 0.5}));
    ExtendedState b = a;
    ScriptedNoise na({0.3, -1.2, 0.8});
    ScriptedNoise nb({0.3, -1.2, 0.8});
    step_S(a, sc, zero_potential(1), na);
    step_O(b, sc.o, nb);
    CHECK(max_abs(a.p - b.p) < 1e-15);
    CHECK(max_abs(a.s - b.s) < 1e-15);

    const GleParams ou = scalar_ou(1.0);
    ExtendedState x = state(vec({0.0}), vec({2.0}), vec({0.0}));
    ZeroNoise zero;
    step_S(x, make_sstep(ou, 1.0), linear_potential(1.0), zero);
    CHECK(x.p(0) == Approx(2.0 * std::exp(-1.0) - (1.0 - std::exp(-1.0))).epsilon(1e-14));

    // Small-h expansion: (p, s) + h(−∇U, 0) + O(h²).
    const Potential lin = linear_potential(1.5);
    const ExtendedState start = state(vec({0.0}), vec({0.4}), vec({-0.3, 0.2}));
    auto increment = [&](double h) {
        ExtendedState y = start;
        ZeroNoise z;
        step_S(y, make_sstep(p, h), lin, z);
        ExtendedState o = start;
        step_O(o, make_ostep(p, h), z);
        return (y.p(0) - o.p(0)) / h;
    };
    const double d1 = increment(1e-3), d2 = increment(5e-4);
    CHECK(2.0 * d2 - d1 == Approx(-1.5).epsilon(1e-6));
    CHECK(std::abs(d1 + 1.5) < 1e-2);
}

TEST_CASE("scheme names") {
    CHECK(parse_scheme("BAOAB").name() == "BAOAB");
    CHECK(parse_scheme("gle-obabo").name() == "OBABO");
    CHECK(parse_scheme("GLE-ABOBA").kind == SchemeKind::Palindrome);
    CHECK(parse_scheme("ASA").kind == SchemeKind::Asa);
    CHECK(parse_scheme("sas").kind == SchemeKind::Sas);
    CHECK(parse_scheme("LD-BAOAB").kind == SchemeKind::LdBaoab);
    CHECK(parse_scheme("BAOAB-LIMIT").kind == SchemeKind::BaoabLimit);
    CHECK(parse_scheme("BB-BAOB").kind == SchemeKind::BbBaob);
    CHECK(parse_scheme("BB-BACOCAB").kind == SchemeKind::BbBacocab);
    for (const char* bad : {"BAAOB", "BAOBA", "BABAB", "BAXAB", "BAOA", "", "KLS-OBABO"}) {
        CHECK_THROWS_AS(parse_scheme(bad), SchemeError);
    }
}

TEST_CASE("frictionless BAOAB is velocity Verlet") {
    const Potential h = harmonic(kOne);
    auto st = build_integrator(parse_scheme("BAOAB"), frictionless(), h, 0.1, std::make_unique<ZeroNoise>());
    ExtendedState x = state(vec({1.0}), vec({0.0}), vec({0.0}));
    st->step(x);
    CHECK(x.q(0) == Approx(0.995).epsilon(1e-15));
    CHECK(x.p(0) == Approx(-0.09975).epsilon(1e-14));
}

TEST_CASE("frictionless palindromes are time reversible") {
    const Potential dw = double_well();
    for (const char* word : {"BAOAB", "ABOBA", "OBABO", "OABAO"}) {
        auto st = build_integrator(parse_scheme(word), frictionless(), dw, 0.17, std::make_unique<ZeroNoise>());
        ExtendedState x = state(vec({0.8}), vec({-0.6}), vec({0.0}));
        const ExtendedState x0 = x;
        for (int i = 0; i < 25; ++i) st->step(x);
        x.p = -x.p;
        for (int i = 0; i < 25; ++i) st->step(x);
        x.p = -x.p;
        CHECK(std::abs(x.q(0) - x0.q(0)) < 1e-12);
        CHECK(std::abs(x.p(0) - x0.p(0)) < 1e-12);
    }
}

TEST_CASE("BAOAB equals the explicit five-stage sequence") {
    std::mt19937_64 rng(19);
    std::normal_distribution<double> g;
    const GleParams p = builtin_kv_8_8(1, 1.0);
    const Potential dw = double_well();
    const double h = 0.07;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> script(9);
        for (double& v : script) v = g(rng);
        ExtendedState x = state(vec({g(rng)}), vec({g(rng)}), Vector::Zero(8));
        for (int i = 0; i < 8; ++i) x.s(i) = g(rng);
        ExtendedState y = x;
        auto st = build_integrator(parse_scheme("BAOAB"), p, dw, h, std::make_unique<ScriptedNoise>(script));
        st->step(x);
        ScriptedNoise noise(script);
        step_B(y, 0.5 * h, dw);
        step_A(y, 0.5 * h, p);
        step_O(y, make_ostep(p, h), noise);
        step_A(y, 0.5 * h, p);
        step_B(y, 0.5 * h, dw);
        CHECK(max_abs(x.q - y.q) < 1e-14);
        CHECK(max_abs(x.p - y.p) < 1e-14);
        CHECK(max_abs(x.s - y.s) < 1e-14);
    }
}

TEST_CASE("ASA and SAS compositions") {
    const GleParams p = from_prony(benchmark_prony_terms(1), 1, kOne, 1.0);
    const Potential dw = double_well();
    const double h = 0.11;
    const std::vector<double> script{0.4, -0.2, 1.1, -0.7, 0.3, 0.9};
    ExtendedState x = state(vec({0.3}), vec({-0.5}), vec({0.1, 0.2}));
    ExtendedState y = x;
    auto asa = build_integrator(parse_scheme("ASA"), p, dw, h, std::make_unique<ScriptedNoise>(script));
    asa->step(x);
    ScriptedNoise n1(script);
    step_A(y, 0.5 * h, p);
    step_S(y, make_sstep(p, h), dw, n1);
    step_A(y, 0.5 * h, p);
    CHECK(max_abs(x.q - y.q) < 1e-14);
    CHECK(max_abs(x.p - y.p) < 1e-14);

    ExtendedState u = state(vec({0.3}), vec({-0.5}), vec({0.1, 0.2}));
    ExtendedState v = u;
    auto sas = build_integrator(parse_scheme("SAS"), p, dw, h, std::make_unique<ScriptedNoise>(script));
    sas->step(u);
    ScriptedNoise n2(script);
    const SStepCache half = make_sstep(p, 0.5 * h);
    step_S(v, half, dw, n2);
    step_A(v, h, p);
    step_S(v, half, dw, n2);
    CHECK(max_abs(u.q - v.q) < 1e-14);
    CHECK(max_abs(u.p - v.p) < 1e-14);
    CHECK(max_abs(u.s - v.s) < 1e-14);
}

TEST_CASE("stepper maps agree with the linear-chain oracle") {
    Matrix omega(2, 2);
    omega << 1.5, 0.2, 0.2, 0.8;
    Matrix mass(2, 2);
    mass << 1.0, 0.0, 0.0, 2.0;
    const GleParams p = from_prony(benchmark_prony_terms(0), 2, mass, 0.7);
    const double h = 0.3;
    for (const char* word : {"BAOAB", "ABOBA", "OBABO", "OABAO", "BOAOB", "ASA", "SAS"}) {
        const SchemeSpec s = parse_scheme(word);
        const Extracted ex = extract(s, p, omega, h, nullptr, true, true);
        const LinearStepMatrices lin = linear_step(s, omega, p, h);
        INFO(word);
        CHECK(max_abs(ex.e - lin.mean_map) < 1e-13);
        CHECK(max_abs(ex.c - lin.noise_cov) < 1e-13);
    }
    BaselineSpec base;
    base.friction = Matrix::Identity(2, 2) * 1.3;
    base.prony_terms = bb_terms_from_prony(benchmark_prony_terms(0));
    {
        const SchemeSpec s = parse_scheme("LD-BAOAB");
        const Extracted ex = extract(s, p, omega, h, &base, true, false);
        const LinearStepMatrices lin = linear_step(s, omega, p, h, &base);
        CHECK(max_abs(ex.e - lin.mean_map) < 1e-13);
        CHECK(max_abs(ex.c - lin.noise_cov) < 1e-13);
    }
    for (const char* word : {"BB-BAOB", "BB-BACOCAB"}) {
        const SchemeSpec s = parse_scheme(word);
        const Extracted ex = extract(s, p, omega, h, &base, true, true);
        const LinearStepMatrices lin = linear_step(s, omega, p, h, &base);
        INFO(word);
        CHECK(max_abs(ex.e - lin.mean_map) < 1e-13);
        CHECK(max_abs(ex.c - lin.noise_cov) < 1e-13);
    }
}

TEST_CASE("ld-BAOAB") {
    BaselineSpec base;
    base.friction = kOne;
    const GleParams p = scalar_ou(1.0);
    auto st = build_integrator(parse_scheme("LD-BAOAB"), p, zero_potential(1), 1.0,
                               std::make_unique<ZeroNoise>(), &base);
    ExtendedState x = state(vec({0.0}), vec({2.0}), vec({0.0}));
    st->step(x);
    CHECK(x.p(0) == Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(x.q(0) == Approx(0.5 * 2.0 + 0.5 * 2.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(build_integrator(parse_scheme("LD-BAOAB"), p, zero_potential(1), 1.0,
                                     std::make_unique<ZeroNoise>()),
                    SchemeError);
}

TEST_CASE("BAOAB-limit uses the average of consecutive draws") {
    BaselineSpec base;
    base.mobility = kOne;
    base.h_tilde = 0.5;
    const GleParams p = scalar_ou(1.0);
    {
        auto st = build_integrator(parse_scheme("BAOAB-LIMIT"), p, zero_potential(1), 1.0,
                                   std::make_unique<ScriptedNoise>(std::vector<double>{0.0, 0.0}), &base);
        ExtendedState x = state(vec({0.3}), vec({0.0}), vec({0.0}));
        st->step(x);
        CHECK(x.q(0) == 0.3);
        CHECK(st->time_step() == 0.5);
    }
    {
        auto st = build_integrator(parse_scheme("BAOAB-LIMIT"), p, zero_potential(1), 1.0,
                                   std::make_unique<ScriptedNoise>(std::vector<double>{1.0, 1.0, -1.0}),
                                   &base);
        ExtendedState x = state(vec({0.3}), vec({0.0}), vec({0.0}));
        st->step(x);
        CHECK(x.q(0) == Approx(1.3).epsilon(1e-15));
        st->step(x);
        CHECK(x.q(0) == Approx(1.3).epsilon(1e-15));
    }
    {
        // Drift term: q ← q − h̃Λ∇U.
        auto st = build_integrator(parse_scheme("BAOAB-LIMIT"), p, linear_potential(2.0), 1.0,
                                   std::make_unique<ZeroNoise>(), &base);
        ExtendedState x = state(vec({0.0}), vec({0.0}), vec({0.0}));
        st->step(x);
        CHECK(x.q(0) == Approx(-1.0));
    }
}

TEST_CASE("BB coefficients and continuity") {
    CHECK(bb_theta(0.1, 1.0) == Approx(std::exp(-0.1)).epsilon(1e-15));
    CHECK(bb_theta(0.1, 1.0) == Approx(0.9048374).margin(1e-7));
    CHECK(bb_alpha(0.1, 1.0) == Approx((1.0 - std::exp(-0.1)) / std::sqrt(0.1)).epsilon(1e-14));
    CHECK(bb_alpha(0.1, 1.0) == Approx(0.3009305).margin(1e-7));
    const auto terms = bb_terms_from_prony(benchmark_prony_terms(0));
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].tau == Approx(4.0));
    CHECK(terms[0].c == Approx(10.0));
    CHECK(terms[1].tau == Approx(8.0));
    CHECK(terms[1].c == Approx(4.0));
    CHECK_THROWS_AS(bb_terms_from_prony({{1.0, 1.0, 2.0}}), UnsupportedError);

    BaselineSpec base;
    base.prony_terms = terms;
    const GleParams p = from_prony(benchmark_prony_terms(0), 1, kOne, 1.0);
    const Potential dw = double_well();
    double prev = INFINITY;
    for (double h : {1e-2, 1e-3, 1e-4}) {
        auto st = build_integrator(parse_scheme("BB-BACOCAB"), p, dw, h, std::make_unique<ZeroNoise>(), &base);
        ExtendedState x = state(vec({0.5}), vec({-0.3}), vec({0.2, -0.1}));
        const ExtendedState x0 = x;
        st->step(x);
        const double change = std::max({max_abs(x.q - x0.q), max_abs(x.p - x0.p), max_abs(x.s - x0.s)});
        CHECK(change < 10.0 * h);
        CHECK(change < prev);
        prev = change;
    }
}

TEST_CASE("seeded steppers are deterministic") {
    const GleParams p = from_prony(benchmark_prony_terms(0), 1, kOne, 1.0);
    const Potential dw = double_well();
    auto a = build_integrator(parse_scheme("BAOAB"), p, dw, 0.1, std::make_unique<GaussianNoise>(std::initializer_list<std::uint64_t>{5, 1}));
    auto b = build_integrator(parse_scheme("BAOAB"), p, dw, 0.1, std::make_unique<GaussianNoise>(std::initializer_list<std::uint64_t>{5, 1}));
    auto c = build_integrator(parse_scheme("BAOAB"), p, dw, 0.1, std::make_unique<GaussianNoise>(std::initializer_list<std::uint64_t>{5, 2}));
    ExtendedState x = state(vec({0.1}), vec({0.0}), Vector::Zero(2));
    ExtendedState y = x, z = x;
    for (int i = 0; i < 1000; ++i) {
        a->step(x);
        b->step(y);
        c->step(z);
    }
    CHECK(x.q == y.q);
    CHECK(x.p == y.p);
    CHECK(x.s == y.s);
    CHECK(x.q != z.q);
}

TEST_CASE("BAOAB one-step moments match the exact flow to third order") {
    // Generator of the linear QGLE on U = ½Ω q² for x = (q, p, s).
    const GleParams p = from_prony(benchmark_prony_terms(1), 1, kOne, 1.0);
    const Matrix omega = scalar(1.3);
    Matrix a = Matrix::Zero(4, 4);
    a(0, 1) = 1.0;
    a(1, 0) = -1.3;
    a.bottomRightCorner(3, 3) = -p.gamma_m();
    const Matrix v = Eigen::Vector4d(1.0 / 1.3, 1.0, 1.0, 1.0).asDiagonal();
    auto errors = [&](double h) {
        const LinearStepMatrices lin = linear_step(parse_scheme("BAOAB"), omega, p, h);
        const Matrix e = expm(h * a);
        const Matrix c = v - e * v * e.transpose();
        return std::pair{max_abs(lin.mean_map - e), max_abs(lin.noise_cov - c)};
    };
    const auto [e1, c1] = errors(0.02);
    const auto [e2, c2] = errors(0.01);
    CHECK(e1 / e2 > 6.0);
    CHECK(c1 / c2 > 6.0);
    CHECK(e1 < 1e-4);
}

TEST_CASE("integrator rejects mismatched inputs") {
    const GleParams p = from_prony(benchmark_prony_terms(0), 1, kOne, 1.0);
    CHECK_THROWS_AS(build_integrator(parse_scheme("BAOAB"), p, harmonic(Matrix::Identity(2, 2)), 0.1,
                                     std::make_unique<ZeroNoise>()),
                    DimensionError);
    CHECK_THROWS_AS(build_integrator(parse_scheme("BAOAB"), p, double_well(), -0.1, std::make_unique<ZeroNoise>()),
                    DomainError);
    CHECK_THROWS(build_integrator(parse_scheme("BAOAB"), p, double_well(), 0.1, nullptr));
    const GleParams singular = frictionless();
    CHECK_THROWS_AS(make_sstep(singular, 0.1), NumericalError);
}
