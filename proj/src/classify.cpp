#include "igbs/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>

#include "igbs/errors.hpp"

namespace igbs {

FeatureMatrix::FeatureMatrix(std::size_t rows_, std::size_t dims_, std::vector<double> values_)
    : rows(rows_), dims(dims_), values(std::move(values_)) {
    if (values.size() != rows * dims) throw DataError("feature matrix size does not match rows x dims");
}

FeatureMatrix extract_features(const QuantizedCube& qcube, std::span<const std::size_t> bands,
                               std::span<const std::size_t> pixels) {
    if (bands.empty()) throw ConfigError("feature extraction needs at least one band");
    const double scale = static_cast<double>(qcube.levels() - 1);
    std::vector<double> values(pixels.size() * bands.size());
    for (std::size_t j = 0; j < bands.size(); ++j) {
        if (bands[j] >= qcube.bands()) throw ConfigError("band " + std::to_string(bands[j]) + " out of range");
        const auto band = qcube.band(bands[j]);
        for (std::size_t i = 0; i < pixels.size(); ++i) {
            values[i * bands.size() + j] = static_cast<double>(band[pixels[i]]) / scale;
        }
    }
    return FeatureMatrix(pixels.size(), bands.size(), std::move(values));
}

std::vector<Label> labels_at(const GroundTruth& gt, std::span<const std::size_t> pixels) {
    std::vector<Label> out;
    out.reserve(pixels.size());
    for (std::size_t p : pixels) out.push_back(gt.labels().at(p));
    return out;
}

namespace {

// Unbiased draw from [0, bound) using rejection; std::uniform_int_distribution
// is implementation-defined and would break cross-platform split parity.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % bound;
}

}  // namespace

SplitPlan stratified_split(const GroundTruth& gt, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw ConfigError("train fraction must lie strictly between 0 and 1");
    }
    std::map<Label, std::vector<std::size_t>> by_class;
    const auto& labels = gt.labels();
    for (std::size_t p = 0; p < labels.size(); ++p) {
        if (labels[p] != 0) by_class[labels[p]].push_back(p);
    }

    SplitPlan plan;
    plan.seed = seed;
    plan.train_fraction = fraction;
    std::mt19937_64 rng(seed);
    for (auto& [label, pixels] : by_class) {
        if (pixels.size() < 2) {
            throw DataError("class " + std::to_string(label) + " has fewer than 2 labeled pixels");
        }
        // Fisher-Yates
        for (std::size_t i = pixels.size() - 1; i > 0; --i) {
            std::swap(pixels[i], pixels[uniform_below(rng, i + 1)]);
        }
        const auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(pixels.size())));
        plan.train.insert(plan.train.end(), pixels.begin(), pixels.begin() + static_cast<std::ptrdiff_t>(n_train));
        plan.test.insert(plan.test.end(), pixels.begin() + static_cast<std::ptrdiff_t>(n_train), pixels.end());
    }
    std::sort(plan.train.begin(), plan.train.end());
    std::sort(plan.test.begin(), plan.test.end());
    return plan;
}

std::vector<Label> knn_predict(const FeatureMatrix& train, std::span<const Label> train_labels,
                               const FeatureMatrix& test) {
    if (train.rows == 0) throw DataError("1-NN needs a nonempty training set");
    if (train_labels.size() != train.rows) throw DataError("training labels do not match training rows");
    if (test.dims != train.dims) throw DataError("test feature dimension does not match training");

    std::vector<Label> out(test.rows);
    for (std::size_t t = 0; t < test.rows; ++t) {
        const auto q = test.row(t);
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < train.rows; ++i) {
            const auto r = train.row(i);
            double d2 = 0.0;
            for (std::size_t k = 0; k < train.dims && d2 < best; ++k) {
                const double diff = q[k] - r[k];
                d2 += diff * diff;
            }
            if (d2 < best) {
                best = d2;
                best_idx = i;
            }
        }
        out[t] = train_labels[best_idx];
    }
    return out;
}

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t i) const {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < size(); ++j) s += at(i, j);
    return s;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t j) const {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < size(); ++i) s += at(i, j);
    return s;
}

ConfusionMatrix confusion_matrix(std::span<const Label> predicted, std::span<const Label> truth) {
    if (predicted.size() != truth.size()) {
        throw DataError("prediction count " + std::to_string(predicted.size()) + " does not match truth count " +
                        std::to_string(truth.size()));
    }
    if (truth.empty()) throw DataError("cannot evaluate an empty prediction set");

    std::set<Label> seen(truth.begin(), truth.end());
    seen.insert(predicted.begin(), predicted.end());
    ConfusionMatrix cm;
    cm.classes.assign(seen.begin(), seen.end());
    cm.counts.assign(cm.size() * cm.size(), 0);
    auto index_of = [&](Label l) {
        return static_cast<std::size_t>(std::lower_bound(cm.classes.begin(), cm.classes.end(), l) - cm.classes.begin());
    };
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++cm.counts[index_of(truth[i]) * cm.size() + index_of(predicted[i])];
    }
    return cm;
}

EvalReport evaluate(const ConfusionMatrix& confusion) {
    const std::uint64_t total = confusion.total();
    if (total == 0) throw DataError("cannot evaluate an empty confusion matrix");

    EvalReport report;
    report.confusion = confusion;
    std::uint64_t diag = 0;
    std::uint64_t chance = 0;  // sum of row_i * col_i
    for (std::size_t i = 0; i < confusion.size(); ++i) {
        diag += confusion.at(i, i);
        const auto row = confusion.row_sum(i);
        chance += row * confusion.col_sum(i);
        if (row == 0) {
            report.class_accuracy.emplace_back(std::nullopt);
        } else {
            report.class_accuracy.emplace_back(static_cast<double>(confusion.at(i, i)) / static_cast<double>(row));
        }
    }
    const double n = static_cast<double>(total);
    report.overall_accuracy = static_cast<double>(diag) / n;
    // kappa = (p_o - p_e) / (1 - p_e), scaled by n^2 to stay in integers.
    const double n2 = n * n;
    const double agree = n * static_cast<double>(diag);
    const double expected = static_cast<double>(chance);
    // expected == n^2 only when truth and prediction are the same single class.
    report.kappa = expected >= n2 ? 1.0 : (agree - expected) / (n2 - expected);
    return report;
}

EvalReport evaluate(std::span<const Label> predicted, std::span<const Label> truth) {
    return evaluate(confusion_matrix(predicted, truth));
}

}  // namespace igbs
