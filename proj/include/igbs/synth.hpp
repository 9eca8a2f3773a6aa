#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "igbs/datamodel.hpp"

namespace igbs {

struct SynthSpec {
    std::size_t rows = 64;
    std::size_t cols = 64;
    std::size_t bands = 50;
    std::size_t classes = 4;
    std::vector<std::size_t> informative_bands{0, 1, 2, 3, 4};
    double noise_sigma = 1.0;
    double class_separation = 10.0;
    std::uint64_t seed = 1;
};

/// What the generator planted, for checking selectors against.
struct SynthOracle {
    std::vector<std::size_t> informative_bands;
    /// class_means[i][c]: mean of informative band i for class label c + 1.
    std::vector<std::vector<double>> class_means;
};

struct SynthScene {
    HyperCube cube;
    GroundTruth gt;
    SynthOracle oracle;
};

void validate(const SynthSpec& spec);

/// Classes tile the grid as contiguous runs of row-major pixels, every pixel
/// labeled. Informative bands draw class_mean + N(0, sigma) with the mean of
/// label c + 1 at c * separation; other bands are N(0, sigma) regardless of
/// class.
SynthScene generate_cube(const SynthSpec& spec);

}  // namespace igbs
