#include "igbs/datamodel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "igbs/errors.hpp"

namespace igbs {

HyperCube::HyperCube(std::size_t bands, std::size_t rows, std::size_t cols, std::vector<float> values)
    : bands_(bands), rows_(rows), cols_(cols), values_(std::move(values)) {
    if (bands_ == 0 || rows_ == 0 || cols_ == 0) {
        throw DataError("hypercube dimensions must be positive");
    }
    if (values_.size() != bands_ * rows_ * cols_) {
        throw DataError("hypercube holds " + std::to_string(values_.size()) + " values, expected " +
                        std::to_string(bands_ * rows_ * cols_));
    }
}

std::span<const float> HyperCube::band(std::size_t b) const {
    return std::span<const float>(values_).subspan(b * pixels(), pixels());
}

GroundTruth::GroundTruth(std::size_t rows, std::size_t cols, std::vector<Label> labels)
    : rows_(rows), cols_(cols), labels_(std::move(labels)) {
    if (rows_ == 0 || cols_ == 0) {
        throw DataError("ground truth dimensions must be positive");
    }
    if (labels_.size() != rows_ * cols_) {
        throw DataError("ground truth holds " + std::to_string(labels_.size()) + " labels, expected " +
                        std::to_string(rows_ * cols_));
    }
    if (classes().size() < 2) {
        throw DataError("ground truth needs at least two distinct nonzero labels");
    }
}

std::vector<Label> GroundTruth::classes() const {
    std::set<Label> seen;
    for (Label l : labels_) {
        if (l != 0) seen.insert(l);
    }
    return {seen.begin(), seen.end()};
}

std::size_t GroundTruth::labeled_count() const {
    return static_cast<std::size_t>(std::count_if(labels_.begin(), labels_.end(), [](Label l) { return l != 0; }));
}

Label GroundTruth::max_label() const { return *std::max_element(labels_.begin(), labels_.end()); }

QuantizedCube::QuantizedCube(std::size_t bands, std::size_t rows, std::size_t cols, unsigned levels,
                             std::vector<std::uint8_t> values)
    : bands_(bands), rows_(rows), cols_(cols), levels_(levels), values_(std::move(values)) {
    if (levels_ < kMinLevels || levels_ > kMaxLevels) {
        throw ConfigError("quantization levels must be in [2, 256], got " + std::to_string(levels_));
    }
    if (bands_ == 0 || rows_ == 0 || cols_ == 0 || values_.size() != bands_ * rows_ * cols_) {
        throw DataError("quantized cube geometry does not match its value count");
    }
    for (std::uint8_t v : values_) {
        if (v >= levels_) throw DataError("quantized value outside [0, levels)");
    }
}

std::span<const std::uint8_t> QuantizedCube::band(std::size_t b) const {
    return std::span<const std::uint8_t>(values_).subspan(b * pixels(), pixels());
}

DiscreteSeries::DiscreteSeries(std::vector<std::uint32_t> symbols, std::size_t alphabet)
    : symbols_(std::move(symbols)), alphabet_(alphabet) {
    if (symbols_.empty()) throw DataError("discrete series is empty");
    if (alphabet_ == 0) throw DataError("discrete series alphabet is empty");
    for (std::uint32_t s : symbols_) {
        if (s >= alphabet_) throw DataError("symbol " + std::to_string(s) + " outside alphabet of size " +
                                            std::to_string(alphabet_));
    }
}

QuantizedCube quantize_cube(const HyperCube& cube, unsigned levels) {
    if (levels < kMinLevels || levels > kMaxLevels) {
        throw ConfigError("quantization levels must be in [2, 256], got " + std::to_string(levels));
    }
    const std::size_t n = cube.pixels();
    std::vector<std::uint8_t> out(cube.bands() * n, 0);
    const double top = static_cast<double>(levels - 1);

    for (std::size_t b = 0; b < cube.bands(); ++b) {
        auto band = cube.band(b);
        for (float v : band) {
            if (!std::isfinite(v)) throw DataError("band " + std::to_string(b) + " contains a non-finite value");
        }
        const auto [lo_it, hi_it] = std::minmax_element(band.begin(), band.end());
        const double lo = *lo_it;
        const double range = static_cast<double>(*hi_it) - lo;
        if (range == 0.0) continue;  // constant band stays all zeros

        std::uint8_t* dst = out.data() + b * n;
        for (std::size_t i = 0; i < n; ++i) {
            const double scaled = (static_cast<double>(band[i]) - lo) * top / range;
            const double q = std::floor(scaled + 0.5);
            dst[i] = static_cast<std::uint8_t>(std::clamp(q, 0.0, top));
        }
    }
    return QuantizedCube(cube.bands(), cube.rows(), cube.cols(), levels, std::move(out));
}

void check_geometry(const QuantizedCube& qcube, const GroundTruth& gt) {
    if (qcube.rows() != gt.rows() || qcube.cols() != gt.cols()) {
        throw DataError("ground truth is " + std::to_string(gt.rows()) + "x" + std::to_string(gt.cols()) +
                        " but cube is " + std::to_string(qcube.rows()) + "x" + std::to_string(qcube.cols()));
    }
}

void check_geometry(const HyperCube& cube, const GroundTruth& gt) {
    if (cube.rows() != gt.rows() || cube.cols() != gt.cols()) {
        throw DataError("ground truth is " + std::to_string(gt.rows()) + "x" + std::to_string(gt.cols()) +
                        " but cube is " + std::to_string(cube.rows()) + "x" + std::to_string(cube.cols()));
    }
}

std::vector<std::size_t> labeled_pixels(const GroundTruth& gt) {
    std::vector<std::size_t> idx;
    const auto& labels = gt.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0) idx.push_back(i);
    }
    if (idx.empty()) throw DataError("ground truth has no labeled pixels");
    return idx;
}

DiscreteSeries labeled_series(const QuantizedCube& qcube, const GroundTruth& gt, std::size_t band) {
    check_geometry(qcube, gt);
    if (band >= qcube.bands()) {
        throw DataError("band " + std::to_string(band) + " out of range (cube has " + std::to_string(qcube.bands()) +
                        " bands)");
    }
    const auto pixels = labeled_pixels(gt);
    const auto values = qcube.band(band);
    std::vector<std::uint32_t> symbols;
    symbols.reserve(pixels.size());
    for (std::size_t p : pixels) symbols.push_back(values[p]);
    return DiscreteSeries(std::move(symbols), qcube.levels());
}

DiscreteSeries label_series(const GroundTruth& gt) {
    const auto pixels = labeled_pixels(gt);
    std::vector<std::uint32_t> symbols;
    symbols.reserve(pixels.size());
    for (std::size_t p : pixels) symbols.push_back(gt.labels()[p]);
    return DiscreteSeries(std::move(symbols), static_cast<std::size_t>(gt.max_label()) + 1);
}

}  // namespace igbs
