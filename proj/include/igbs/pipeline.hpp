#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "igbs/classify.hpp"
#include "igbs/datamodel.hpp"
#include "igbs/selection.hpp"
#include "igbs/svm.hpp"
#include "igbs/synth.hpp"

namespace igbs {

enum class Classifier { Svm, Knn };

std::string_view classifier_name(Classifier c);
Classifier parse_classifier(std::string_view name);

/// Everything one experiment needs. Field names double as the JSON keys and
/// the CLI flag names.
struct RunConfig {
    // Dataset: either cube + gt files, or an inline synthetic scene.
    std::string cube;  // <name>.hdr.json
    std::string raw;   // defaults to <name>.raw
    std::string gt;    // .gt.raw (u16) or .csv
    std::optional<SynthSpec> synth;
    std::vector<std::string> class_names;  // optional, index = label - 1

    std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
    std::size_t k = 80;
    unsigned levels = kDefaultLevels;
    double beta = 0.5;
    double threshold = -0.02;
    double lambda = 1.0;

    Classifier classifier = Classifier::Svm;
    double svm_c = 100.0;
    double svm_gamma = 0.0;  // <= 0 means 1 / number of selected bands
    double svm_tol = 1e-3;
    std::size_t svm_max_iter = 1'000'000;

    double train_fraction = 0.5;
    std::uint64_t seed = 42;
    std::string output_dir = "run";
    bool write_maps = true;

    SelectionParams selection_params() const { return {beta, threshold, lambda}; }
    SvmParams svm_params() const;
};

/// Checks ranges and dataset presence; throws ConfigError.
void validate(const RunConfig& config);

std::string config_to_json(const RunConfig& config);
/// Parses a JSON config. Unknown keys are rejected.
RunConfig config_from_json(const std::string& text);
/// Reads a JSON config file, or a report file carrying an embedded `config = {...}` line.
RunConfig load_config(const std::filesystem::path& path);

SynthSpec synth_spec_from_json(const std::string& text);
std::string synth_spec_to_json(const SynthSpec& spec);

struct Dataset {
    std::string name;
    HyperCube cube;
    GroundTruth gt;
    std::optional<SynthOracle> oracle;
};

Dataset load_dataset(const RunConfig& config);

/// Classifier outcome on one band subset.
EvalReport classify_bands(const QuantizedCube& qcube, const GroundTruth& gt, std::span<const std::size_t> bands,
                          const RunConfig& config);

/// Estimated ground truth over the whole grid: the rounded band mean at each
/// labeled pixel, with every mean level relabeled to the class it most often
/// co-occurs with (lowest label on ties). Unlabeled pixels stay 0.
std::vector<Label> estimated_gt_map(const QuantizedCube& qcube, const GroundTruth& gt,
                                    std::span<const std::size_t> bands);

struct MethodOutcome {
    Method method = Method::IGBS;
    std::optional<SelectionResult> selection;
    std::optional<EvalReport> report;
    std::string error;  // nonempty iff this method failed
    std::vector<Label> map;
};

struct CompareResult {
    std::vector<MethodOutcome> outcomes;
    std::string table;
};

/// select -> train -> predict -> evaluate for every configured method. A
/// failing method is recorded and the others still run. Writes
/// `<output_dir>/<method>.report.txt`, `<output_dir>/<method>.map.ppm` and
/// `<output_dir>/comparison.txt` when output_dir is nonempty.
CompareResult run_compare(const RunConfig& config);
CompareResult run_compare(const RunConfig& config, const Dataset& dataset);

std::string format_selection(const SelectionResult& result, const RunConfig& config, const Dataset& dataset);
/// `method_label` replaces the method name, e.g. for hand-picked band sets.
std::string format_report(const MethodOutcome& outcome, const RunConfig& config, const Dataset& dataset,
                          std::string_view method_label = {});
std::string format_comparison(const std::vector<MethodOutcome>& outcomes, const RunConfig& config,
                              const Dataset& dataset);

}  // namespace igbs
