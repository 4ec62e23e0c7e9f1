#include "glelab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <string>

#include "glelab/errors.hpp"

namespace glelab {

Potential::Potential(std::string name, int dim, EnergyFn energy, GradientFn gradient)
    : name_(std::move(name)), dim_(dim), energy_(std::move(energy)), gradient_(std::move(gradient)) {
    if (dim_ < 1) throw DimensionError("potential: dimension must be at least 1");
}

Vector Potential::gradient(const Vector& q) const {
    Vector out(dim_);
    gradient_(q, out);
    return out;
}

double gradient_check(const Potential& potential, const std::vector<Vector>& points, double h) {
    double worst = 0.0;
    Vector grad(potential.dim());
    for (const Vector& q : points) {
        potential.gradient(q, grad);
        const double scale = std::max(1.0, grad.cwiseAbs().maxCoeff());
        Vector shifted = q;
        for (int i = 0; i < potential.dim(); ++i) {
            shifted(i) = q(i) + h;
            const double up = potential.energy(shifted);
            shifted(i) = q(i) - h;
            const double down = potential.energy(shifted);
            shifted(i) = q(i);
            const double fd = (up - down) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - grad(i)) / scale);
        }
    }
    return worst;
}

namespace {

void require_consistent_gradient(const Potential& potential, const std::vector<Vector>& points) {
    const double err = gradient_check(potential, points);
    if (!(err <= 1e-6)) {
        throw ValidationError("potential '" + potential.name() +
                              "': gradient disagrees with finite differences (" +
                              std::to_string(err) + ")");
    }
}

std::vector<Vector> probe_points(int dim, double spread) {
    std::vector<Vector> pts;
    for (int k = 0; k < 3; ++k) {
        Vector q(dim);
        for (int i = 0; i < dim; ++i) q(i) = spread * std::sin(1.3 * (i + 1) + 2.1 * k);
        pts.push_back(q);
    }
    return pts;
}

}  // namespace

Potential harmonic(const Matrix& omega) {
    if (omega.rows() != omega.cols() || omega.rows() < 1) {
        throw DimensionError("harmonic: omega must be square");
    }
    Eigen::LLT<Matrix> llt(omega);
    if (!omega.allFinite() || max_abs(omega - omega.transpose()) > 1e-12 * max_abs(omega) ||
        llt.info() != Eigen::Success) {
        throw ValidationError("harmonic: omega must be symmetric positive definite");
    }
    const Matrix w = omega;
    Potential pot(
        "harmonic", static_cast<int>(w.rows()),
        [w](const Vector& q) { return 0.5 * q.dot(w * q); },
        [w](const Vector& q, Vector& g) { g.noalias() = w * q; });
    pot.set_quadratic(w);
    require_consistent_gradient(pot, probe_points(pot.dim(), 1.0));
    return pot;
}

Potential double_well() {
    Potential pot(
        "double_well", 1,
        [](const Vector& q) { return 0.5 * q(0) * q(0) + std::sin(0.25 + 2.0 * q(0)); },
        [](const Vector& q, Vector& g) { g(0) = q(0) + 2.0 * std::cos(0.25 + 2.0 * q(0)); });
    require_consistent_gradient(pot, probe_points(1, 2.0));
    return pot;
}

std::vector<double> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "dataset: cannot open '" + path + "'");
    std::vector<double> values;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        std::string text = hash == std::string::npos ? raw : raw.substr(0, hash);
        const auto first = text.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = text.find_last_not_of(" \t\r");
        text = text.substr(first, last - first + 1);
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0' || !std::isfinite(v)) {
            throw ParseError(line, "dataset: invalid value '" + text + "'");
        }
        values.push_back(v);
    }
    return values;
}

std::vector<double> synthetic_mixture_data(std::size_t count, std::uint64_t seed) {
    std::seed_seq seq{seed, std::uint64_t{0x6d69787475726521ULL}};
    std::mt19937_64 engine(seq);
    std::discrete_distribution<int> pick({0.3, 0.4, 0.3});
    std::normal_distribution<double> unit;
    const double means[3] = {-3.0, 0.0, 3.0};
    std::vector<double> out(count);
    for (auto& y : out) {
        const int k = pick(engine);
        y = means[k] + unit(engine);
    }
    return out;
}

}  // namespace glelab
