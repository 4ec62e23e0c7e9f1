#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "glelab/errors.hpp"
#include "glelab/potentials.hpp"

namespace glelab {

namespace {

// e^{−β(U−U_min)} below e^{−kCut} is treated as zero mass.
constexpr double kCut = 100.0;
constexpr double kTail = 5e-5;

double eval_energy(const Potential& pot, double x) {
    Vector q(1);
    q(0) = x;
    return pot.energy(q);
}

double root_in(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) throw NumericalError("root bracket does not change sign");
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace

Density1D::Density1D(const Potential& potential, double beta, int panels)
    : potential_(std::make_shared<const Potential>(potential)), beta_(beta) {
    if (potential.dim() != 1) throw DimensionError("reference measure: potential must be 1-D");
    if (!(beta > 0.0)) throw ValidationError("reference measure: beta must be positive");
    if (panels < 16) throw ValidationError("reference measure: too few panels");

    double ref = eval_energy(*potential_, 0.0);
    double half = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
        while (beta * (std::min(eval_energy(*potential_, -half), eval_energy(*potential_, half)) -
                       ref) < kCut + 10.0) {
            half *= 2.0;
            if (half > 1e12) throw NumericalError("reference measure: potential is not confining");
        }
        double umin = ref;
        const int grid = 20001;
        for (int i = 0; i < grid; ++i) {
            const double x = -half + 2.0 * half * i / (grid - 1);
            umin = std::min(umin, eval_energy(*potential_, x));
        }
        shift_ = umin;
        ref = umin;
    }
    // Shrink to where the density has decayed below e^{−kCut}.
    auto excess = [&](double x) { return beta_ * (eval_energy(*potential_, x) - shift_) - kCut; };
    double argmin = 0.0;
    {
        double best = INFINITY;
        const int grid = 20001;
        for (int i = 0; i < grid; ++i) {
            const double x = -half + 2.0 * half * i / (grid - 1);
            const double u = eval_energy(*potential_, x);
            if (u < best) {
                best = u;
                argmin = x;
            }
        }
    }
    lo_ = excess(-half) > 0.0 ? root_in(excess, -half, argmin) : -half;
    hi_ = excess(half) > 0.0 ? root_in(excess, argmin, half) : half;

    nodes_.resize(static_cast<std::size_t>(panels) + 1);
    cum_.assign(nodes_.size(), 0.0);
    for (int i = 0; i <= panels; ++i) nodes_[i] = lo_ + (hi_ - lo_) * i / panels;
    nodes_.back() = hi_;
    z_ = 1.0;
    for (int i = 0; i < panels; ++i) cum_[i + 1] = cum_[i] + integrate(nodes_[i], nodes_[i + 1]);
    z_ = cum_.back();
    if (!(z_ > 0.0) || !std::isfinite(z_)) throw NumericalError("reference measure: bad normaliser");
}

double Density1D::density(double q) const {
    return std::exp(-beta_ * (eval_energy(*potential_, q) - shift_)) / z_;
}

double Density1D::integrate(double x0, double x1) const {
    auto f = [this](double x) { return std::exp(-beta_ * (eval_energy(*potential_, x) - shift_)); };
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, x0, x1, 5, 1e-12, &error);
    if (!std::isfinite(value)) throw NumericalError("reference measure: quadrature failed");
    return value;
}

double Density1D::mass(double x0, double x1) const {
    if (x1 <= x0) return 0.0;
    const double a = std::max(x0, lo_);
    const double b = std::min(x1, hi_);
    if (b <= a) return 0.0;
    return integrate(a, b) / z_;
}

double Density1D::cdf(double q) const {
    if (q <= lo_) return 0.0;
    if (q >= hi_) return 1.0;
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), q);
    const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return (cum_[k] + integrate(nodes_[k], q)) / z_;
}

double Density1D::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile: u must lie in (0, 1)");
    const double target = u * z_;
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    std::size_t k = static_cast<std::size_t>(it - cum_.begin());
    k = std::clamp<std::size_t>(k, 1, cum_.size() - 1) - 1;
    const double x0 = nodes_[k];
    const double x1 = nodes_[k + 1];
    const double need = target - cum_[k];
    auto f = [&](double x) {
        auto g = [this](double y) {
            return std::exp(-beta_ * (eval_energy(*potential_, y) - shift_));
        };
        return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, x0, x, 0) - need;
    };
    const double f0 = -need;
    const double f1 = f(x1);
    if (f0 >= 0.0) return x0;
    if (f1 <= 0.0) return x1;
    std::uintmax_t iters = 100;
    const auto r = boost::math::tools::toms748_solve(
        f, x0, x1, f0, f1, boost::math::tools::eps_tolerance<double>(40), iters);
    return 0.5 * (r.first + r.second);
}

ReferenceMeasure1D reference_measure_1d(const Potential& potential, double beta, int n_bins,
                                        int refinement) {
    if (n_bins < 1) throw ValidationError("reference measure: n_bins must be positive");
    if (refinement < 1) throw ValidationError("reference measure: refinement must be positive");
    const Density1D dens(potential, beta);
    auto lower = [&](double x) { return dens.cdf(x) - kTail; };
    auto upper = [&](double x) { return dens.cdf(x) - (1.0 - kTail); };
    ReferenceMeasure1D ref;
    ref.a = root_in(lower, dens.lo(), dens.hi());
    ref.b = root_in(upper, dens.lo(), dens.hi());
    ref.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
    for (int i = 0; i <= n_bins; ++i) {
        ref.bin_edges[i] = ref.a + (ref.b - ref.a) * i / n_bins;
    }
    ref.bin_edges.back() = ref.b;
    ref.bin_probs.resize(static_cast<std::size_t>(n_bins));
    for (int i = 0; i < n_bins; ++i) {
        const double x0 = ref.bin_edges[i];
        const double x1 = ref.bin_edges[i + 1];
        double total = 0.0;
        for (int j = 0; j < refinement; ++j) {
            total += dens.mass(x0 + (x1 - x0) * j / refinement,
                               j + 1 == refinement ? x1 : x0 + (x1 - x0) * (j + 1) / refinement);
        }
        ref.bin_probs[i] = total;
    }
    return ref;
}

}  // namespace glelab
