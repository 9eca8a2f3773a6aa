// igbs: band selection, classification and comparison runs from the command line.
//
//   igbs synth    --out data/scene [--config spec.json] [--rows ...]
//   igbs select   --cube X.hdr.json --gt X.gt.raw --methods IGBS --k 80
//   igbs classify --cube X.hdr.json --gt X.gt.raw --bands 3,17,42 --classifier knn
//   igbs compare  --config run.json [--output_dir out]
//   igbs render   --cube X.hdr.json --gt X.gt.raw [--bands ...] --out map.ppm
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 method failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "igbs/errors.hpp"
#include "igbs/io.hpp"
#include "igbs/pipeline.hpp"

namespace fs = std::filesystem;
using namespace igbs;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitMethod = 4;

// Value of `--config` if present, found before CLI11 runs so that file values
// become the defaults the remaining flags override.
std::optional<std::string> find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return std::nullopt;
}

void add_dataset_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--cube", cfg.cube, "Cube header (<name>.hdr.json)");
    cmd->add_option("--raw", cfg.raw, "Raw cube samples (default: <name>.raw)");
    cmd->add_option("--gt", cfg.gt, "Ground truth (.gt.raw u16 grid or .csv)");
}

void add_selection_flags(CLI::App* cmd, RunConfig& cfg, std::vector<std::string>& methods) {
    cmd->add_option("--methods", methods, "Selection methods (MIM, MIFS, MRMR, MIBF, IGBS)")->delimiter(',');
    cmd->add_option("--k", cfg.k, "Number of bands to select");
    cmd->add_option("--levels", cfg.levels, "Quantization levels (2..256)");
    cmd->add_option("--beta", cfg.beta, "MIFS redundancy weight");
    cmd->add_option("--threshold", cfg.threshold, "MIBF acceptance threshold (bits)");
    cmd->add_option("--lambda", cfg.lambda, "IGBS interaction-term weight");
}

void add_classifier_flags(CLI::App* cmd, RunConfig& cfg, std::string& classifier) {
    cmd->add_option("--classifier", classifier, "svm or knn");
    cmd->add_option("--svm_c", cfg.svm_c, "SVM penalty C");
    cmd->add_option("--svm_gamma", cfg.svm_gamma, "RBF width; <= 0 means 1/bands");
    cmd->add_option("--svm_tol", cfg.svm_tol, "SMO KKT tolerance");
    cmd->add_option("--svm_max_iter", cfg.svm_max_iter, "SMO iteration cap per class pair");
    cmd->add_option("--train_fraction", cfg.train_fraction, "Per-class training fraction");
    cmd->add_option("--seed", cfg.seed, "Split seed");
}

void apply_lists(RunConfig& cfg, const std::vector<std::string>& methods, const std::string& classifier) {
    if (!methods.empty()) {
        cfg.methods.clear();
        for (const auto& m : methods) cfg.methods.push_back(parse_method(m));
    }
    if (!classifier.empty()) cfg.classifier = parse_classifier(classifier);
}

std::vector<std::size_t> parse_band_list(const std::string& text) {
    std::vector<std::size_t> bands;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            bands.push_back(std::stoul(item));
        } catch (const std::exception&) {
            throw ConfigError("bad band index '" + item + "'");
        }
    }
    if (bands.empty()) throw ConfigError("empty band list");
    return bands;
}

// `selected = ...` line of a selection or evaluation report.
std::vector<std::size_t> bands_from_report(const fs::path& path) {
    std::istringstream lines(read_text_file(path));
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("selected = ", 0) == 0) {
            std::istringstream vals(line.substr(11));
            std::vector<std::size_t> bands;
            std::size_t b;
            while (vals >> b) bands.push_back(b);
            return bands;
        }
    }
    throw ConfigError(path.string() + " has no 'selected = ' line");
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }
}

int run_synth(const SynthSpec& spec, const std::string& prefix) {
    const SynthScene scene = generate_cube(spec);
    const fs::path base(prefix);
    if (base.has_parent_path()) fs::create_directories(base.parent_path());
    save_cube(scene.cube, prefix + ".hdr.json", prefix + ".raw");
    save_gt_raw(scene.gt, prefix + ".gt.raw");
    std::string oracle = "{\"informative_bands\": [";
    for (std::size_t i = 0; i < scene.oracle.informative_bands.size(); ++i) {
        oracle += (i ? ", " : "") + std::to_string(scene.oracle.informative_bands[i]);
    }
    oracle += "], \"spec\": " + synth_spec_to_json(spec) + "}\n";
    write_text_file(prefix + ".oracle.json", oracle);
    std::cout << "wrote " << prefix << ".hdr.json, .raw, .gt.raw, .oracle.json\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information-gain band selection for hyperspectral images"};
    app.require_subcommand(1);

    RunConfig cfg;
    SynthSpec synth;
    const auto config_path = find_config_arg(argc, argv);
    std::string config_arg;
    std::vector<std::string> methods;
    std::string classifier;
    std::string out_path;
    std::string bands_arg;
    std::string selection_path;
    std::size_t render_rows = 0;
    std::size_t render_cols = 0;

    auto* select = app.add_subcommand("select", "Select bands and print the ordered selection");
    auto* classify = app.add_subcommand("classify", "Classify with a given band subset");
    auto* compare = app.add_subcommand("compare", "Run every method end to end and tabulate");
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic cube with planted informative bands");
    auto* render = app.add_subcommand("render", "Render a ground truth or estimated ground truth map (PPM)");

    try {
        if (config_path) {
            const std::string text = read_text_file(*config_path);
            // synth accepts a bare spec; every other verb a run config.
            bool is_synth = false;
            for (int i = 1; i < argc; ++i) is_synth = is_synth || std::string(argv[i]) == "synth";
            if (is_synth) synth = synth_spec_from_json(text);
            else cfg = load_config(*config_path);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    for (auto* cmd : {select, classify, compare, render}) {
        cmd->add_option("--config", config_arg, "JSON run config, or a report to re-run");
        add_dataset_flags(cmd, cfg);
    }
    add_selection_flags(select, cfg, methods);
    select->add_option("--out", out_path, "Write the selection here instead of stdout");

    add_selection_flags(classify, cfg, methods);
    add_classifier_flags(classify, cfg, classifier);
    classify->add_option("--bands", bands_arg, "Comma-separated band indices");
    classify->add_option("--selection", selection_path, "Take bands from a selection or evaluation report");
    classify->add_option("--out", out_path, "Write the report here instead of stdout");

    add_selection_flags(compare, cfg, methods);
    add_classifier_flags(compare, cfg, classifier);
    compare->add_option("--output_dir", cfg.output_dir, "Directory for reports, maps and comparison.txt");
    compare->add_option("--write_maps", cfg.write_maps, "Write <method>.map.ppm files");

    synth_cmd->add_option("--config", config_arg, "JSON synth spec");
    synth_cmd->add_option("--rows", synth.rows);
    synth_cmd->add_option("--cols", synth.cols);
    synth_cmd->add_option("--bands", synth.bands);
    synth_cmd->add_option("--classes", synth.classes);
    synth_cmd->add_option("--informative_bands", synth.informative_bands)->delimiter(',');
    synth_cmd->add_option("--noise_sigma", synth.noise_sigma);
    synth_cmd->add_option("--class_separation", synth.class_separation);
    synth_cmd->add_option("--seed", synth.seed);
    synth_cmd->add_option("--out", out_path, "Output prefix")->required();

    render->add_option("--levels", cfg.levels, "Quantization levels for estimated maps");
    render->add_option("--bands", bands_arg, "Render the estimated ground truth of these bands");
    render->add_option("--selection", selection_path, "Take bands from a selection or evaluation report");
    render->add_option("--rows", render_rows, "Grid rows when no cube is given");
    render->add_option("--cols", render_cols, "Grid cols when no cube is given");
    render->add_option("--out", out_path, "Output .ppm")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        apply_lists(cfg, methods, classifier);

        if (synth_cmd->parsed()) return run_synth(synth, out_path);

        if (compare->parsed()) {
            const CompareResult result = run_compare(cfg);
            std::cout << result.table;
            for (const auto& o : result.outcomes) {
                if (!o.error.empty()) return kExitMethod;
            }
            return 0;
        }

        if (render->parsed() && cfg.cube.empty() && !cfg.synth) {
            if (cfg.gt.empty() || render_rows == 0 || render_cols == 0) {
                throw ConfigError("render needs --gt with --cube or --rows/--cols");
            }
            const GroundTruth gt = load_gt(cfg.gt, render_rows, render_cols);
            export_map(gt.labels(), gt.rows(), gt.cols(), out_path);
            return 0;
        }

        validate(cfg);
        const Dataset dataset = load_dataset(cfg);
        const QuantizedCube qcube = quantize_cube(dataset.cube, cfg.levels);

        if (select->parsed()) {
            const BandData data(qcube, dataset.gt);
            std::string text;
            for (Method m : cfg.methods) {
                text += format_selection(greedy_select(data, m, cfg.k, cfg.selection_params()), cfg, dataset);
            }
            emit(text, out_path);
            return 0;
        }

        std::vector<std::size_t> bands;
        if (!bands_arg.empty()) bands = parse_band_list(bands_arg);
        else if (!selection_path.empty()) bands = bands_from_report(selection_path);

        if (render->parsed()) {
            if (bands.empty()) {
                export_map(dataset.gt.labels(), dataset.gt.rows(), dataset.gt.cols(), out_path);
            } else {
                export_map(estimated_gt_map(qcube, dataset.gt, bands), dataset.gt.rows(), dataset.gt.cols(), out_path);
            }
            return 0;
        }

        if (classify->parsed()) {
            if (bands.empty()) throw ConfigError("classify needs --bands or --selection");
            MethodOutcome outcome;
            SelectionResult manual;
            manual.selected = bands;
            manual.step_scores.assign(bands.size(), 0.0);
            outcome.selection = manual;
            outcome.report = classify_bands(qcube, dataset.gt, bands, cfg);
            emit(format_report(outcome, cfg, dataset, "manual"), out_path);
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const MethodError& e) {
        std::cerr << "method failure: " << e.what() << "\n";
        return kExitMethod;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMethod;
    }
    return 0;
}
