#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace igbs {

/// Band-major radiance cube: value (band, row, col) lives at
/// `band * rows * cols + row * cols + col`.
class HyperCube {
public:
    HyperCube(std::size_t bands, std::size_t rows, std::size_t cols, std::vector<float> values);

    std::size_t bands() const { return bands_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t pixels() const { return rows_ * cols_; }

    std::span<const float> band(std::size_t b) const;
    float at(std::size_t b, std::size_t r, std::size_t c) const { return values_[(b * rows_ + r) * cols_ + c]; }
    const std::vector<float>& values() const { return values_; }

private:
    std::size_t bands_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<float> values_;
};

using Label = std::uint16_t;

/// Per-pixel class map in row-major order. Label 0 marks an unlabeled pixel.
class GroundTruth {
public:
    /// Requires at least two distinct nonzero labels.
    GroundTruth(std::size_t rows, std::size_t cols, std::vector<Label> labels);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t pixels() const { return rows_ * cols_; }
    Label at(std::size_t r, std::size_t c) const { return labels_[r * cols_ + c]; }
    const std::vector<Label>& labels() const { return labels_; }

    /// Sorted distinct nonzero labels.
    std::vector<Label> classes() const;
    std::size_t labeled_count() const;
    Label max_label() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Label> labels_;
};

/// Cube discretized to `levels` symbols per band, same layout as HyperCube.
class QuantizedCube {
public:
    QuantizedCube(std::size_t bands, std::size_t rows, std::size_t cols, unsigned levels,
                  std::vector<std::uint8_t> values);

    std::size_t bands() const { return bands_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t pixels() const { return rows_ * cols_; }
    unsigned levels() const { return levels_; }

    std::span<const std::uint8_t> band(std::size_t b) const;
    const std::vector<std::uint8_t>& values() const { return values_; }

private:
    std::size_t bands_;
    std::size_t rows_;
    std::size_t cols_;
    unsigned levels_;
    std::vector<std::uint8_t> values_;
};

/// A sequence of symbols drawn from [0, alphabet).
class DiscreteSeries {
public:
    DiscreteSeries(std::vector<std::uint32_t> symbols, std::size_t alphabet);

    std::size_t size() const { return symbols_.size(); }
    std::size_t alphabet() const { return alphabet_; }
    std::uint32_t operator[](std::size_t i) const { return symbols_[i]; }
    const std::vector<std::uint32_t>& symbols() const { return symbols_; }

    friend bool operator==(const DiscreteSeries&, const DiscreteSeries&) = default;

private:
    std::vector<std::uint32_t> symbols_;
    std::size_t alphabet_;
};

inline constexpr unsigned kMinLevels = 2;
inline constexpr unsigned kMaxLevels = 256;
inline constexpr unsigned kDefaultLevels = 16;

/// Scales one band linearly so its minimum maps to 0 and its maximum to
/// levels - 1, rounding half up. A constant band maps to all zeros.
/// Throws DataError naming the band on NaN/Inf input.
QuantizedCube quantize_cube(const HyperCube& cube, unsigned levels);

/// Row-major indices of the labeled (nonzero) pixels.
std::vector<std::size_t> labeled_pixels(const GroundTruth& gt);

/// The quantized values of `band` at the labeled pixels, in row-major order.
DiscreteSeries labeled_series(const QuantizedCube& qcube, const GroundTruth& gt, std::size_t band);

/// Class labels at the labeled pixels, in the same order as labeled_series().
/// Alphabet is max_label + 1.
DiscreteSeries label_series(const GroundTruth& gt);

void check_geometry(const QuantizedCube& qcube, const GroundTruth& gt);
void check_geometry(const HyperCube& cube, const GroundTruth& gt);

}  // namespace igbs
