#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "igbs/datamodel.hpp"

namespace igbs {

enum class Method { MIM, MIFS, MRMR, MIBF, IGBS };

inline constexpr Method kAllMethods[] = {Method::MIBF, Method::MIFS, Method::MRMR, Method::MIM, Method::IGBS};

std::string_view method_name(Method m);
/// Case-insensitive; throws ConfigError on unknown names.
Method parse_method(std::string_view name);

struct SelectionParams {
    double beta = 0.5;         // MIFS redundancy weight
    double threshold = -0.02;  // MIBF acceptance threshold (bits)
    double lambda = 1.0;       // IGBS weight of the interaction term
};

/// Scores closer than this (bits) count as tied; ties go to the lower band index.
inline constexpr double kScoreTieEpsilon = 1e-12;

/// Labeled-pixel series of every band plus the class series, extracted once
/// and shared by all selectors.
class BandData {
public:
    BandData(const QuantizedCube& qcube, const GroundTruth& gt);

    std::size_t bands() const { return bands_.size(); }
    std::size_t samples() const { return labels_.size(); }
    unsigned levels() const { return levels_; }
    const DiscreteSeries& band(std::size_t b) const { return bands_.at(b); }
    const DiscreteSeries& labels() const { return labels_; }

private:
    std::vector<DiscreteSeries> bands_;
    DiscreteSeries labels_;
    unsigned levels_;
};

struct SelectionState {
    std::vector<std::size_t> selected;        // accepted bands, in acceptance order
    std::vector<std::size_t> remaining;       // candidates, ascending
    std::vector<double> relevance;            // MI(band, GT) for every band
    std::optional<DiscreteSeries> estimated_gt;  // IGBS / MIBF only

    /// State after accepting the single band in `selected` (or none).
    static SelectionState initial(const BandData& data, std::vector<std::size_t> selected, bool with_estimated_gt);
    void accept(const BandData& data, std::size_t band);
};

struct SelectionResult {
    Method method = Method::IGBS;
    SelectionParams params;
    unsigned levels = kDefaultLevels;
    std::size_t k = 0;
    std::vector<std::size_t> selected;
    std::vector<double> step_scores;
};

/// MI(band, GT) over labeled pixels, one entry per band.
std::vector<double> relevance_scores(const BandData& data);
std::vector<double> relevance_scores(const QuantizedCube& qcube, const GroundTruth& gt);

/// Pixel-wise mean of the given bands' quantized values, rounded half up.
DiscreteSeries build_estimated_gt(const BandData& data, std::span<const std::size_t> bands);
DiscreteSeries build_estimated_gt(const QuantizedCube& qcube, const GroundTruth& gt, std::span<const std::size_t> bands);

/// relevance - beta * sum over selected of MI(candidate, s).
double score_mifs(const BandData& data, std::size_t candidate, const SelectionState& state, double beta);
/// relevance - mean over selected of MI(candidate, s). Needs a nonempty selection.
double score_mrmr(const BandData& data, std::size_t candidate, const SelectionState& state);
/// relevance + lambda / |selected| * interaction_information(GT, estimated GT, candidate).
double score_igbs(const BandData& data, std::size_t candidate, const SelectionState& state, double lambda);

/// Greedy forward selection of up to k bands.
///
/// The first band is always the most relevant one. MIM then continues down the
/// relevance ranking; MIFS, MRMR and IGBS take the remaining band with the best
/// method score, IGBS rebuilding the estimated ground truth after each
/// acceptance. MIBF walks candidates in relevance order and keeps one only if
/// it raises MI(estimated GT, GT) by more than the threshold, so it may return
/// fewer than k bands.
SelectionResult greedy_select(const BandData& data, Method method, std::size_t k, const SelectionParams& params = {});
SelectionResult greedy_select(const QuantizedCube& qcube, const GroundTruth& gt, Method method, std::size_t k,
                              const SelectionParams& params = {});

void validate_params(const SelectionParams& params);

}  // namespace igbs
