#include "igbs/infotheory.hpp"

#include <cmath>
#include <string>

#include "igbs/errors.hpp"

namespace igbs {

JointHistogram::JointHistogram(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (dims_.empty() || dims_.size() > 3) {
        throw DataError("joint histogram supports 1 to 3 variables, got " + std::to_string(dims_.size()));
    }
    std::size_t cells = 1;
    for (std::size_t d : dims_) {
        if (d == 0) throw DataError("joint histogram axis has zero size");
        cells *= d;
    }
    counts_.assign(cells, 0);
}

std::uint64_t JointHistogram::count(std::size_t a) const { return counts_.at(a); }

std::uint64_t JointHistogram::count(std::size_t a, std::size_t b) const { return counts_.at(a * dims_.at(1) + b); }

std::uint64_t JointHistogram::count(std::size_t a, std::size_t b, std::size_t c) const {
    return counts_.at((a * dims_.at(1) + b) * dims_.at(2) + c);
}

void JointHistogram::add_cell(std::size_t flat_index, std::uint64_t n) {
    counts_.at(flat_index) += n;
    total_ += n;
}

JointHistogram JointHistogram::marginalize(std::size_t axis) const {
    if (axis >= arity()) throw DataError("marginalize: axis out of range");
    if (arity() == 1) throw DataError("marginalize: cannot remove the only axis");

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < arity(); ++i) {
        if (i != axis) kept.push_back(dims_[i]);
    }
    JointHistogram out(kept);

    // Decompose each flat index as (outer, axis, inner).
    std::size_t inner = 1;
    for (std::size_t i = axis + 1; i < arity(); ++i) inner *= dims_[i];
    const std::size_t span = dims_[axis];
    for (std::size_t flat = 0; flat < counts_.size(); ++flat) {
        if (counts_[flat] == 0) continue;
        const std::size_t outer_idx = flat / (inner * span);
        const std::size_t inner_idx = flat % inner;
        out.add_cell(outer_idx * inner + inner_idx, counts_[flat]);
    }
    return out;
}

JointHistogram joint_histogram(const std::vector<const DiscreteSeries*>& series) {
    if (series.empty() || series.size() > 3) {
        throw DataError("joint histogram supports 1 to 3 series, got " + std::to_string(series.size()));
    }
    const std::size_t n = series.front()->size();
    std::vector<std::size_t> dims;
    for (const DiscreteSeries* s : series) {
        if (s->size() != n) {
            throw DataError("series length mismatch: " + std::to_string(s->size()) + " vs " + std::to_string(n));
        }
        dims.push_back(s->alphabet());
    }

    JointHistogram h(dims);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t flat = 0;
        for (std::size_t k = 0; k < series.size(); ++k) flat = flat * dims[k] + (*series[k])[i];
        h.add_cell(flat);
    }
    return h;
}

JointHistogram joint_histogram(const DiscreteSeries& x) { return joint_histogram(std::vector{&x}); }

JointHistogram joint_histogram(const DiscreteSeries& x, const DiscreteSeries& y) {
    return joint_histogram(std::vector{&x, &y});
}

JointHistogram joint_histogram(const DiscreteSeries& x, const DiscreteSeries& y, const DiscreteSeries& z) {
    return joint_histogram(std::vector{&x, &y, &z});
}

double entropy(const JointHistogram& h) {
    if (h.total() == 0) throw DataError("entropy of an empty histogram");
    // H = log2 N - (1/N) sum c log2 c
    const double n = static_cast<double>(h.total());
    double acc = 0.0;
    for (std::uint64_t c : h.counts()) {
        if (c == 0) continue;
        const double cd = static_cast<double>(c);
        acc += cd * std::log2(cd);
    }
    const double hbits = std::log2(n) - acc / n;
    return hbits < 0.0 ? 0.0 : hbits;
}

double entropy(const DiscreteSeries& x) { return entropy(joint_histogram(x)); }

double joint_entropy(const DiscreteSeries& x, const DiscreteSeries& y) { return entropy(joint_histogram(x, y)); }

double joint_entropy(const DiscreteSeries& x, const DiscreteSeries& y, const DiscreteSeries& z) {
    return entropy(joint_histogram(x, y, z));
}

DiscreteSeries pair_encode(const DiscreteSeries& x, const DiscreteSeries& y) {
    if (x.size() != y.size()) {
        throw DataError("series length mismatch: " + std::to_string(x.size()) + " vs " + std::to_string(y.size()));
    }
    std::vector<std::uint32_t> fused(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        fused[i] = static_cast<std::uint32_t>(x[i] * y.alphabet() + y[i]);
    }
    return DiscreteSeries(std::move(fused), x.alphabet() * y.alphabet());
}

double mutual_information(const DiscreteSeries& x, const DiscreteSeries& y) {
    const JointHistogram xy = joint_histogram(x, y);
    return entropy(xy.marginalize(1)) + entropy(xy.marginalize(0)) - entropy(xy);
}

double interaction_information(const DiscreteSeries& a, const DiscreteSeries& b, const DiscreteSeries& c) {
    const DiscreteSeries ab = pair_encode(a, b);
    return mutual_information(ab, c) - mutual_information(a, c) - mutual_information(b, c);
}

}  // namespace igbs
