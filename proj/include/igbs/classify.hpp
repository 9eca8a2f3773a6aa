#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "igbs/datamodel.hpp"

namespace igbs {

/// Dense row-major sample matrix; one row per pixel, one column per band.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t dims = 0;
    std::vector<double> values;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t dims, std::vector<double> values);

    std::span<const double> row(std::size_t i) const { return {values.data() + i * dims, dims}; }
};

/// Quantized values of `bands` at `pixels`, scaled to [0, 1] by levels - 1.
FeatureMatrix extract_features(const QuantizedCube& qcube, std::span<const std::size_t> bands,
                               std::span<const std::size_t> pixels);

std::vector<Label> labels_at(const GroundTruth& gt, std::span<const std::size_t> pixels);

/// Per-class random train/test partition of the labeled pixels.
struct SplitPlan {
    std::uint64_t seed = 0;
    double train_fraction = 0.5;
    std::vector<std::size_t> train;  // row-major pixel indices, ascending
    std::vector<std::size_t> test;   // row-major pixel indices, ascending
};

/// Shuffles each class (ascending label order) with a single mt19937_64 stream
/// seeded by `seed`, sending the first floor(fraction * n) pixels to training.
/// Throws DataError if any class has fewer than two labeled pixels.
SplitPlan stratified_split(const GroundTruth& gt, double fraction, std::uint64_t seed);

/// 1-nearest-neighbour under Euclidean distance; equal distances resolve to
/// the lowest training row.
std::vector<Label> knn_predict(const FeatureMatrix& train, std::span<const Label> train_labels,
                               const FeatureMatrix& test);

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
    std::vector<Label> classes;
    std::vector<std::uint64_t> counts;

    std::size_t size() const { return classes.size(); }
    std::uint64_t at(std::size_t truth, std::size_t predicted) const { return counts[truth * size() + predicted]; }
    std::uint64_t total() const;
    std::uint64_t row_sum(std::size_t i) const;
    std::uint64_t col_sum(std::size_t j) const;
};

struct EvalReport {
    ConfusionMatrix confusion;
    /// Producer's accuracy per class; empty when the class has no test pixels.
    std::vector<std::optional<double>> class_accuracy;
    double overall_accuracy = 0.0;
    double kappa = 0.0;
    /// Run parameters in the order they were recorded.
    std::vector<std::pair<std::string, std::string>> params;
};

/// Overall accuracy, Cohen's kappa and per-class accuracy from a confusion matrix.
EvalReport evaluate(const ConfusionMatrix& confusion);
EvalReport evaluate(std::span<const Label> predicted, std::span<const Label> truth);

/// Confusion matrix over the sorted union of labels seen in either series.
ConfusionMatrix confusion_matrix(std::span<const Label> predicted, std::span<const Label> truth);

}  // namespace igbs
