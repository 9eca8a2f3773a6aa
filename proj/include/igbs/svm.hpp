#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "igbs/classify.hpp"
#include "igbs/datamodel.hpp"

namespace igbs {

struct SvmParams {
    double c = 100.0;
    double gamma = 0.0;  // <= 0 selects 1 / feature dimension
    double tol = 1e-3;
    std::size_t max_iter = 1'000'000;
    std::size_t cache_mb = 256;
};

/// Soft-margin RBF machine separating `positive` (+1) from `negative` (-1).
/// decision(x) = sum_k coef_k * K(sv_k, x) + bias
struct BinarySvm {
    Label positive = 0;
    Label negative = 0;
    double gamma = 1.0;
    double c = 1.0;
    std::size_t dims = 0;
    FeatureMatrix support_vectors;
    std::vector<double> coef;  // alpha_k * y_k for each support vector
    double bias = 0.0;

    // Solver diagnostics over the full training set of this pair.
    std::vector<double> alpha;
    std::vector<int> y;
    std::size_t iterations = 0;

    double decision(std::span<const double> x) const;
};

/// One-vs-one ensemble; machines are ordered (0,1), (0,2), ..., (1,2), ...
/// over the ascending class list.
struct SvmModel {
    std::vector<Label> classes;
    std::vector<BinarySvm> machines;
    double c = 0.0;
    double gamma = 0.0;
    double tol = 0.0;
    std::size_t dims = 0;
};

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// Trains one binary machine by sequential minimal optimization with
/// second-order working-set selection. `y` holds +1 / -1.
/// Throws MethodError if the KKT gap is still above tol after max_iter steps.
BinarySvm train_binary_svm(const FeatureMatrix& x, std::span<const int> y, const SvmParams& params);

/// Trains every class pair. gamma <= 0 in params resolves to 1 / dims.
SvmModel train_svm(const FeatureMatrix& x, std::span<const Label> labels, const SvmParams& params);

/// Majority vote over the pairwise machines; vote ties go to the lowest class.
std::vector<Label> predict(const SvmModel& model, const FeatureMatrix& x);

}  // namespace igbs
