#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "igbs/datamodel.hpp"

namespace testing_support {

inline igbs::DiscreteSeries series(std::vector<std::uint32_t> v, std::size_t alphabet = 0) {
    if (alphabet == 0) {
        for (auto s : v) alphabet = std::max<std::size_t>(alphabet, s + 1);
    }
    return igbs::DiscreteSeries(std::move(v), alphabet);
}

inline std::vector<std::uint32_t> random_symbols(std::mt19937_64& rng, std::size_t n, std::uint32_t alphabet) {
    std::vector<std::uint32_t> v(n);
    for (auto& s : v) s = static_cast<std::uint32_t>(rng() % alphabet);
    return v;
}

// Quantized cube whose bands mix the class label with noise at varying rates.
struct Instance {
    igbs::QuantizedCube qcube;
    igbs::GroundTruth gt;
};

inline Instance random_instance(std::uint64_t seed, std::size_t bands = 6, std::size_t rows = 16,
                                std::size_t cols = 16, unsigned levels = 8, unsigned classes = 3) {
    std::mt19937_64 rng(seed);
    const std::size_t n = rows * cols;
    std::vector<igbs::Label> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<igbs::Label>(1 + (i < classes ? i : rng() % classes));
    std::vector<std::uint8_t> values(bands * n);
    for (std::size_t b = 0; b < bands; ++b) {
        const unsigned keep = static_cast<unsigned>(rng() % 101);  // percent of pixels tied to the label
        const unsigned offset = static_cast<unsigned>(rng() % levels);
        for (std::size_t i = 0; i < n; ++i) {
            const bool tied = rng() % 100 < keep;
            const unsigned v = tied ? (labels[i] * 2 + offset) % levels : static_cast<unsigned>(rng() % levels);
            values[b * n + i] = static_cast<std::uint8_t>(v);
        }
    }
    return {igbs::QuantizedCube(bands, rows, cols, levels, std::move(values)),
            igbs::GroundTruth(rows, cols, std::move(labels))};
}

}  // namespace testing_support
