#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <random>
#include <vector>

#include "glelab/matfun.hpp"

namespace glelab {

// Supplier of standard-normal vectors.
class NoiseSource {
public:
    virtual ~NoiseSource() = default;
    virtual void fill(Eigen::Ref<Vector> out) = 0;
    virtual std::unique_ptr<NoiseSource> clone() const = 0;
};

// Seeded Mersenne-Twister stream; the seed words (master seed, chain index,
// ...) are mixed through std::seed_seq.
class GaussianNoise final : public NoiseSource {
public:
    explicit GaussianNoise(std::initializer_list<std::uint64_t> seed_words);
    explicit GaussianNoise(const std::vector<std::uint64_t>& seed_words);
    void fill(Eigen::Ref<Vector> out) override;
    std::unique_ptr<NoiseSource> clone() const override;
    double uniform();
    double normal() { return normal_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

// Returns caller-provided values in order; throws once exhausted.
class ScriptedNoise final : public NoiseSource {
public:
    explicit ScriptedNoise(std::vector<double> values);
    void fill(Eigen::Ref<Vector> out) override;
    std::unique_ptr<NoiseSource> clone() const override;
    std::size_t consumed() const { return next_; }
    std::size_t remaining() const { return values_.size() - next_; }

private:
    std::vector<double> values_;
    std::size_t next_ = 0;
};

class ZeroNoise final : public NoiseSource {
public:
    void fill(Eigen::Ref<Vector> out) override { out.setZero(); }
    std::unique_ptr<NoiseSource> clone() const override { return std::make_unique<ZeroNoise>(); }
};

}  // namespace glelab
