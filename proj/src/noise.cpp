#include "glelab/noise.hpp"

#include "glelab/errors.hpp"

namespace glelab {

namespace {

std::mt19937_64 seeded_engine(const std::vector<std::uint64_t>& words) {
    std::vector<std::uint32_t> halves;
    halves.reserve(2 * words.size());
    for (std::uint64_t w : words) {
        halves.push_back(static_cast<std::uint32_t>(w & 0xffffffffu));
        halves.push_back(static_cast<std::uint32_t>(w >> 32));
    }
    std::seed_seq seq(halves.begin(), halves.end());
    return std::mt19937_64(seq);
}

}  // namespace

GaussianNoise::GaussianNoise(std::initializer_list<std::uint64_t> seed_words)
    : GaussianNoise(std::vector<std::uint64_t>(seed_words)) {}

GaussianNoise::GaussianNoise(const std::vector<std::uint64_t>& seed_words)
    : engine_(seeded_engine(seed_words)) {}

void GaussianNoise::fill(Eigen::Ref<Vector> out) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = normal_(engine_);
}

std::unique_ptr<NoiseSource> GaussianNoise::clone() const {
    return std::make_unique<GaussianNoise>(*this);
}

double GaussianNoise::uniform() { return uniform_(engine_); }

ScriptedNoise::ScriptedNoise(std::vector<double> values) : values_(std::move(values)) {}

void ScriptedNoise::fill(Eigen::Ref<Vector> out) {
    if (static_cast<std::size_t>(out.size()) > remaining()) {
        throw Error("scripted noise exhausted");
    }
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = values_[next_++];
}

std::unique_ptr<NoiseSource> ScriptedNoise::clone() const {
    return std::make_unique<ScriptedNoise>(*this);
}

}  // namespace glelab
