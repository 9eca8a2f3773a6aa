#include "igbs/selection.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "igbs/errors.hpp"
#include "igbs/infotheory.hpp"

namespace igbs {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::MIM: return "MIM";
        case Method::MIFS: return "MIFS";
        case Method::MRMR: return "MRMR";
        case Method::MIBF: return "MIBF";
        case Method::IGBS: return "IGBS";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    for (Method m : kAllMethods) {
        if (method_name(m) == upper) return m;
    }
    throw ConfigError("unknown selection method '" + std::string(name) + "' (expected MIM, MIFS, MRMR, MIBF or IGBS)");
}

void validate_params(const SelectionParams& params) {
    if (!std::isfinite(params.beta) || params.beta < 0.0) throw ConfigError("beta must be finite and >= 0");
    if (!std::isfinite(params.threshold)) throw ConfigError("threshold must be finite");
    if (!std::isfinite(params.lambda)) throw ConfigError("lambda must be finite");
}

namespace {

std::vector<DiscreteSeries> extract_bands(const QuantizedCube& qcube, const GroundTruth& gt) {
    check_geometry(qcube, gt);
    const auto pixels = labeled_pixels(gt);
    std::vector<DiscreteSeries> out;
    out.reserve(qcube.bands());
    for (std::size_t b = 0; b < qcube.bands(); ++b) {
        const auto values = qcube.band(b);
        std::vector<std::uint32_t> symbols;
        symbols.reserve(pixels.size());
        for (std::size_t p : pixels) symbols.push_back(values[p]);
        out.emplace_back(std::move(symbols), qcube.levels());
    }
    return out;
}

std::uint32_t round_half_up_mean(std::uint64_t sum, std::uint64_t count) {
    return static_cast<std::uint32_t>((2 * sum + count) / (2 * count));
}

// Tracks per-pixel sums of the accepted bands so the estimated ground truth
// can be rebuilt without rescanning every accepted band.
class RunningMean {
public:
    RunningMean(std::size_t samples, unsigned levels) : sums_(samples, 0), levels_(levels) {}

    void add(const DiscreteSeries& band) {
        for (std::size_t i = 0; i < sums_.size(); ++i) sums_[i] += band[i];
        ++count_;
    }

    DiscreteSeries mean_with(const DiscreteSeries* extra) const {
        const std::uint64_t count = count_ + (extra ? 1 : 0);
        std::vector<std::uint32_t> out(sums_.size());
        for (std::size_t i = 0; i < sums_.size(); ++i) {
            out[i] = round_half_up_mean(sums_[i] + (extra ? (*extra)[i] : 0), count);
        }
        return DiscreteSeries(std::move(out), levels_);
    }

private:
    std::vector<std::uint64_t> sums_;
    std::uint64_t count_ = 0;
    unsigned levels_;
};

// Index into `candidates` of the best score; earlier entries win ties.
std::size_t pick_best(const std::vector<double>& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best] + kScoreTieEpsilon) best = i;
    }
    return best;
}

}  // namespace

BandData::BandData(const QuantizedCube& qcube, const GroundTruth& gt)
    : bands_(extract_bands(qcube, gt)), labels_(label_series(gt)), levels_(qcube.levels()) {}

std::vector<double> relevance_scores(const BandData& data) {
    std::vector<double> rel(data.bands());
    for (std::size_t b = 0; b < data.bands(); ++b) rel[b] = mutual_information(data.band(b), data.labels());
    return rel;
}

std::vector<double> relevance_scores(const QuantizedCube& qcube, const GroundTruth& gt) {
    return relevance_scores(BandData(qcube, gt));
}

DiscreteSeries build_estimated_gt(const BandData& data, std::span<const std::size_t> bands) {
    if (bands.empty()) throw MethodError("estimated ground truth needs at least one band");
    RunningMean mean(data.samples(), data.levels());
    for (std::size_t b : bands) mean.add(data.band(b));
    return mean.mean_with(nullptr);
}

DiscreteSeries build_estimated_gt(const QuantizedCube& qcube, const GroundTruth& gt,
                                  std::span<const std::size_t> bands) {
    return build_estimated_gt(BandData(qcube, gt), bands);
}

SelectionState SelectionState::initial(const BandData& data, std::vector<std::size_t> selected,
                                       bool with_estimated_gt) {
    SelectionState s;
    s.relevance = relevance_scores(data);
    for (std::size_t b = 0; b < data.bands(); ++b) {
        if (std::find(selected.begin(), selected.end(), b) == selected.end()) s.remaining.push_back(b);
    }
    s.selected = std::move(selected);
    if (with_estimated_gt && !s.selected.empty()) s.estimated_gt = build_estimated_gt(data, s.selected);
    return s;
}

void SelectionState::accept(const BandData& data, std::size_t band) {
    auto it = std::find(remaining.begin(), remaining.end(), band);
    if (it == remaining.end()) throw MethodError("band " + std::to_string(band) + " is not a remaining candidate");
    remaining.erase(it);
    selected.push_back(band);
    if (estimated_gt) estimated_gt = build_estimated_gt(data, selected);
}

namespace {

void require_candidate(const SelectionState& state, std::size_t candidate) {
    if (std::find(state.remaining.begin(), state.remaining.end(), candidate) == state.remaining.end()) {
        throw MethodError("band " + std::to_string(candidate) + " is not a remaining candidate");
    }
}

double redundancy_sum(const BandData& data, std::size_t candidate, const std::vector<std::size_t>& selected) {
    double sum = 0.0;
    for (std::size_t s : selected) sum += mutual_information(data.band(candidate), data.band(s));
    return sum;
}

}  // namespace

double score_mifs(const BandData& data, std::size_t candidate, const SelectionState& state, double beta) {
    require_candidate(state, candidate);
    return state.relevance.at(candidate) - beta * redundancy_sum(data, candidate, state.selected);
}

double score_mrmr(const BandData& data, std::size_t candidate, const SelectionState& state) {
    require_candidate(state, candidate);
    if (state.selected.empty()) throw MethodError("MRMR score needs at least one selected band");
    return state.relevance.at(candidate) -
           redundancy_sum(data, candidate, state.selected) / static_cast<double>(state.selected.size());
}

double score_igbs(const BandData& data, std::size_t candidate, const SelectionState& state, double lambda) {
    require_candidate(state, candidate);
    if (!state.estimated_gt || state.selected.empty()) {
        throw MethodError("IGBS score needs an estimated ground truth built from a nonempty selection");
    }
    const double gain = interaction_information(data.labels(), *state.estimated_gt, data.band(candidate));
    return state.relevance.at(candidate) + lambda * gain / static_cast<double>(state.selected.size());
}

namespace {

// Bands ordered by decreasing relevance, ties by ascending index.
std::vector<std::size_t> relevance_order(const std::vector<double>& relevance) {
    std::vector<std::size_t> pool(relevance.size());
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::size_t> order;
    while (!pool.empty()) {
        std::vector<double> scores;
        for (std::size_t b : pool) scores.push_back(relevance[b]);
        const std::size_t pick = pick_best(scores);
        order.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return order;
}

SelectionResult select_mibf(const BandData& data, std::size_t k, SelectionResult result) {
    const auto relevance = relevance_scores(data);
    const auto order = relevance_order(relevance);

    RunningMean mean(data.samples(), data.levels());
    const std::size_t first = order.front();
    mean.add(data.band(first));
    result.selected.push_back(first);
    result.step_scores.push_back(relevance[first]);
    double current = mutual_information(mean.mean_with(nullptr), data.labels());

    for (std::size_t i = 1; i < order.size() && result.selected.size() < k; ++i) {
        const std::size_t cand = order[i];
        const double with_cand = mutual_information(mean.mean_with(&data.band(cand)), data.labels());
        const double gain = with_cand - current;
        if (gain > result.params.threshold) {
            mean.add(data.band(cand));
            result.selected.push_back(cand);
            result.step_scores.push_back(gain);
            current = with_cand;
        }
    }
    return result;
}

}  // namespace

SelectionResult greedy_select(const BandData& data, Method method, std::size_t k, const SelectionParams& params) {
    validate_params(params);
    if (k == 0 || k > data.bands()) {
        throw ConfigError("k must be in [1, " + std::to_string(data.bands()) + "], got " + std::to_string(k));
    }

    SelectionResult result;
    result.method = method;
    result.params = params;
    result.levels = data.levels();
    result.k = k;

    if (method == Method::MIBF) return select_mibf(data, k, std::move(result));

    SelectionState state = SelectionState::initial(data, {}, false);
    if (method == Method::MIM) {
        const auto order = relevance_order(state.relevance);
        for (std::size_t i = 0; i < k; ++i) {
            result.selected.push_back(order[i]);
            result.step_scores.push_back(state.relevance[order[i]]);
        }
        return result;
    }

    // Initialization: the most relevant band.
    const std::size_t first = state.remaining[pick_best(state.relevance)];
    state.accept(data, first);
    if (method == Method::IGBS) state.estimated_gt = build_estimated_gt(data, state.selected);
    result.selected.push_back(first);
    result.step_scores.push_back(state.relevance[first]);

    // Running redundancy sums for MIFS/MRMR, accumulated in acceptance order so
    // they equal redundancy_sum() bit for bit.
    std::vector<double> redundancy(data.bands(), 0.0);
    auto absorb = [&](std::size_t accepted) {
        if (method != Method::MIFS && method != Method::MRMR) return;
        for (std::size_t c : state.remaining) redundancy[c] += mutual_information(data.band(c), data.band(accepted));
    };
    absorb(first);

    while (result.selected.size() < k && !state.remaining.empty()) {
        std::vector<double> scores;
        scores.reserve(state.remaining.size());
        const double card = static_cast<double>(state.selected.size());
        for (std::size_t c : state.remaining) {
            switch (method) {
                case Method::MIFS: scores.push_back(state.relevance[c] - params.beta * redundancy[c]); break;
                case Method::MRMR: scores.push_back(state.relevance[c] - redundancy[c] / card); break;
                case Method::IGBS: scores.push_back(score_igbs(data, c, state, params.lambda)); break;
                default: throw MethodError("unreachable selection method");
            }
        }
        const std::size_t pick = pick_best(scores);
        const std::size_t band = state.remaining[pick];
        state.accept(data, band);
        result.selected.push_back(band);
        result.step_scores.push_back(scores[pick]);
        absorb(band);
    }
    return result;
}

SelectionResult greedy_select(const QuantizedCube& qcube, const GroundTruth& gt, Method method, std::size_t k,
                              const SelectionParams& params) {
    return greedy_select(BandData(qcube, gt), method, k, params);
}

}  // namespace igbs
