#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "igbs/datamodel.hpp"

// Plug-in (maximum-likelihood) estimators over discrete series. Every
// quantity is in bits and uses the convention 0 log 0 = 0.

namespace igbs {

/// Co-occurrence counts of one to three discrete variables, stored row-major
/// with the last axis varying fastest.
class JointHistogram {
public:
    explicit JointHistogram(std::vector<std::size_t> dims);

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t arity() const { return dims_.size(); }
    std::uint64_t total() const { return total_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }

    std::uint64_t count(std::size_t a) const;
    std::uint64_t count(std::size_t a, std::size_t b) const;
    std::uint64_t count(std::size_t a, std::size_t b, std::size_t c) const;

    void add_cell(std::size_t flat_index, std::uint64_t n = 1);

    /// Sums out `axis`, yielding a histogram of arity - 1 with the same total.
    JointHistogram marginalize(std::size_t axis) const;

private:
    std::vector<std::size_t> dims_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// Builds the joint histogram of 1-3 equal-length series.
JointHistogram joint_histogram(const std::vector<const DiscreteSeries*>& series);
JointHistogram joint_histogram(const DiscreteSeries& x);
JointHistogram joint_histogram(const DiscreteSeries& x, const DiscreteSeries& y);
JointHistogram joint_histogram(const DiscreteSeries& x, const DiscreteSeries& y, const DiscreteSeries& z);

/// Shannon entropy of the (joint) distribution the histogram describes.
double entropy(const JointHistogram& h);
double entropy(const DiscreteSeries& x);
double joint_entropy(const DiscreteSeries& x, const DiscreteSeries& y);
double joint_entropy(const DiscreteSeries& x, const DiscreteSeries& y, const DiscreteSeries& z);

/// Fuses two series into one variable with symbol `x * |y| + y`.
DiscreteSeries pair_encode(const DiscreteSeries& x, const DiscreteSeries& y);

/// I(X;Y) = H(X) + H(Y) - H(X,Y).
double mutual_information(const DiscreteSeries& x, const DiscreteSeries& y);

/// Three-way interaction information I((A,B);C) - I(A;C) - I(B;C).
/// Positive values indicate synergy, negative values redundancy. The result
/// does not depend on argument order.
double interaction_information(const DiscreteSeries& a, const DiscreteSeries& b, const DiscreteSeries& c);

}  // namespace igbs
