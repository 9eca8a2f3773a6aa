#include "igbs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "igbs/errors.hpp"

namespace igbs {

void validate(const SynthSpec& spec) {
    if (spec.rows == 0 || spec.cols == 0 || spec.bands == 0) throw ConfigError("synth: rows, cols and bands must be positive");
    if (spec.classes < 2) throw ConfigError("synth: need at least 2 classes");
    if (spec.classes > spec.rows * spec.cols) {
        throw ConfigError("synth: cannot tile " + std::to_string(spec.rows * spec.cols) + " pixels into " +
                          std::to_string(spec.classes) + " classes");
    }
    if (spec.classes > 65535) throw ConfigError("synth: too many classes for 16-bit labels");
    if (!(spec.class_separation > 0.0) || !std::isfinite(spec.class_separation)) {
        throw ConfigError("synth: class_separation must be positive");
    }
    if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) throw ConfigError("synth: noise_sigma must be >= 0");
    for (std::size_t i = 0; i < spec.informative_bands.size(); ++i) {
        const std::size_t b = spec.informative_bands[i];
        if (b >= spec.bands) throw ConfigError("synth: informative band " + std::to_string(b) + " out of range");
        if (std::count(spec.informative_bands.begin(), spec.informative_bands.end(), b) > 1) {
            throw ConfigError("synth: informative band " + std::to_string(b) + " listed twice");
        }
    }
}

namespace {

// Box-Muller over mt19937_64 so the stream is identical on every standard library.
class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = unit();
        } while (u1 <= 0.0);
        const double u2 = unit();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace

SynthScene generate_cube(const SynthSpec& spec) {
    validate(spec);
    const std::size_t n = spec.rows * spec.cols;

    std::vector<Label> labels(n);
    for (std::size_t p = 0; p < n; ++p) labels[p] = static_cast<Label>(p * spec.classes / n + 1);

    SynthOracle oracle;
    oracle.informative_bands = spec.informative_bands;
    std::vector<int> slot(spec.bands, -1);
    std::vector<double> means(spec.classes);
    for (std::size_t c = 0; c < spec.classes; ++c) means[c] = static_cast<double>(c) * spec.class_separation;
    for (std::size_t i = 0; i < spec.informative_bands.size(); ++i) {
        slot[spec.informative_bands[i]] = static_cast<int>(i);
        oracle.class_means.push_back(means);
    }

    Gaussian noise(spec.seed);
    std::vector<float> values(spec.bands * n);
    for (std::size_t b = 0; b < spec.bands; ++b) {
        for (std::size_t p = 0; p < n; ++p) {
            double v = spec.noise_sigma * noise.next();
            if (slot[b] >= 0) v += oracle.class_means[static_cast<std::size_t>(slot[b])][labels[p] - 1u];
            values[b * n + p] = static_cast<float>(v);
        }
    }

    return SynthScene{HyperCube(spec.bands, spec.rows, spec.cols, std::move(values)),
                      GroundTruth(spec.rows, spec.cols, std::move(labels)), std::move(oracle)};
}

}  // namespace igbs
