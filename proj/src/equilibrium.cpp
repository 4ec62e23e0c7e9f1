#include <cmath>

#include "glelab/errors.hpp"
#include "glelab/stats.hpp"

namespace glelab {

EquilibriumSampler1D::EquilibriumSampler1D(const Potential& potential, const GleParams& params)
    : density_(potential, params.beta()) {
    if (params.n() != 1) throw DimensionError("equilibrium sampler: n must be 1");
    p_factor_ = psd_factor(params.mass() / params.beta());
    s_factor_ = psd_factor(params.q_aux() / params.beta());
}

double EquilibriumSampler1D::draw_q(NoiseSource& noise) const {
    Vector z(1);
    double u = 0.0;
    do {
        noise.fill(z);
        u = 0.5 * std::erfc(-z(0) / std::sqrt(2.0));
    } while (!(u > 0.0 && u < 1.0));
    return density_.quantile(u);
}

ExtendedState EquilibriumSampler1D::draw(NoiseSource& noise) const {
    ExtendedState x;
    x.q = Vector::Constant(1, draw_q(noise));
    Vector r(p_factor_.rows());
    noise.fill(r);
    x.p = p_factor_ * r;
    Vector rs(s_factor_.rows());
    noise.fill(rs);
    x.s = s_factor_ * rs;
    return x;
}

ExtendedState equilibrium_init_1d(const Potential& potential, const GleParams& params,
                                  NoiseSource& noise) {
    return EquilibriumSampler1D(potential, params).draw(noise);
}

}  // namespace glelab
