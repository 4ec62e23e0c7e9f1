#pragma once

#include <memory>

#include "glelab/integrators.hpp"

namespace glelab::detail {

std::unique_ptr<Stepper> make_baseline(const SchemeSpec& scheme, const GleParams& params,
                                       const Potential& potential, double h,
                                       std::unique_ptr<NoiseSource> noise,
                                       const BaselineSpec& baseline);

}  // namespace glelab::detail
