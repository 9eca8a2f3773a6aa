#include "igbs/pipeline.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "igbs/errors.hpp"
#include "igbs/infotheory.hpp"
#include "igbs/io.hpp"

namespace igbs {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view classifier_name(Classifier c) { return c == Classifier::Svm ? "svm" : "knn"; }

Classifier parse_classifier(std::string_view name) {
    if (name == "svm") return Classifier::Svm;
    if (name == "knn" || name == "1nn") return Classifier::Knn;
    throw ConfigError("unknown classifier '" + std::string(name) + "' (expected svm or knn)");
}

SvmParams RunConfig::svm_params() const {
    SvmParams p;
    p.c = svm_c;
    p.gamma = svm_gamma;
    p.tol = svm_tol;
    p.max_iter = svm_max_iter;
    return p;
}

void validate(const RunConfig& config) {
    if (!config.synth && (config.cube.empty() || config.gt.empty())) {
        throw ConfigError("dataset missing: give cube and gt paths or a synth block");
    }
    if (config.synth) validate(*config.synth);
    if (config.methods.empty()) throw ConfigError("no selection methods requested");
    if (config.k == 0) throw ConfigError("k must be at least 1");
    if (config.levels < kMinLevels || config.levels > kMaxLevels) throw ConfigError("levels must be in [2, 256]");
    validate_params(config.selection_params());
    if (!(config.svm_c > 0.0) || !std::isfinite(config.svm_c)) throw ConfigError("svm_c must be positive");
    if (!std::isfinite(config.svm_gamma)) throw ConfigError("svm_gamma must be finite");
    if (!(config.svm_tol > 0.0)) throw ConfigError("svm_tol must be positive");
    if (config.svm_max_iter == 0) throw ConfigError("svm_max_iter must be positive");
    if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
        throw ConfigError("train_fraction must lie strictly between 0 and 1");
    }
}

namespace {

std::string num(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

std::string fixed(double v, int decimals) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, decimals);
    return std::string(buf.data(), end);
}

json synth_to_json_value(const SynthSpec& s) {
    return json{{"rows", s.rows},
                {"cols", s.cols},
                {"bands", s.bands},
                {"classes", s.classes},
                {"informative_bands", s.informative_bands},
                {"noise_sigma", s.noise_sigma},
                {"class_separation", s.class_separation},
                {"seed", s.seed}};
}

SynthSpec synth_from_json_value(const json& j) {
    if (!j.is_object()) throw ConfigError("synth spec must be a JSON object");
    SynthSpec s;
    for (const auto& [key, value] : j.items()) {
        if (key == "rows") s.rows = value.get<std::size_t>();
        else if (key == "cols") s.cols = value.get<std::size_t>();
        else if (key == "bands") s.bands = value.get<std::size_t>();
        else if (key == "classes") s.classes = value.get<std::size_t>();
        else if (key == "informative_bands") s.informative_bands = value.get<std::vector<std::size_t>>();
        else if (key == "noise_sigma") s.noise_sigma = value.get<double>();
        else if (key == "class_separation") s.class_separation = value.get<double>();
        else if (key == "seed") s.seed = value.get<std::uint64_t>();
        else throw ConfigError("unknown synth key '" + key + "'");
    }
    return s;
}

json config_to_json_value(const RunConfig& c) {
    json j;
    j["cube"] = c.cube;
    j["raw"] = c.raw;
    j["gt"] = c.gt;
    j["synth"] = c.synth ? synth_to_json_value(*c.synth) : json(nullptr);
    j["class_names"] = c.class_names;
    std::vector<std::string> methods;
    for (Method m : c.methods) methods.emplace_back(method_name(m));
    j["methods"] = methods;
    j["k"] = c.k;
    j["levels"] = c.levels;
    j["beta"] = c.beta;
    j["threshold"] = c.threshold;
    j["lambda"] = c.lambda;
    j["classifier"] = std::string(classifier_name(c.classifier));
    j["svm_c"] = c.svm_c;
    j["svm_gamma"] = c.svm_gamma;
    j["svm_tol"] = c.svm_tol;
    j["svm_max_iter"] = c.svm_max_iter;
    j["train_fraction"] = c.train_fraction;
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["write_maps"] = c.write_maps;
    return j;
}

}  // namespace

std::string config_to_json(const RunConfig& config) { return config_to_json_value(config).dump(); }

RunConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("cannot parse config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");

    RunConfig c;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "cube") c.cube = value.get<std::string>();
            else if (key == "raw") c.raw = value.get<std::string>();
            else if (key == "gt") c.gt = value.get<std::string>();
            else if (key == "synth") {
                if (value.is_null()) c.synth.reset();
                else c.synth = synth_from_json_value(value);
            } else if (key == "class_names") c.class_names = value.get<std::vector<std::string>>();
            else if (key == "methods") {
                c.methods.clear();
                for (const auto& m : value) c.methods.push_back(parse_method(m.get<std::string>()));
            } else if (key == "k") c.k = value.get<std::size_t>();
            else if (key == "levels") c.levels = value.get<unsigned>();
            else if (key == "beta") c.beta = value.get<double>();
            else if (key == "threshold") c.threshold = value.get<double>();
            else if (key == "lambda") c.lambda = value.get<double>();
            else if (key == "classifier") c.classifier = parse_classifier(value.get<std::string>());
            else if (key == "svm_c") c.svm_c = value.get<double>();
            else if (key == "svm_gamma") c.svm_gamma = value.get<double>();
            else if (key == "svm_tol") c.svm_tol = value.get<double>();
            else if (key == "svm_max_iter") c.svm_max_iter = value.get<std::size_t>();
            else if (key == "train_fraction") c.train_fraction = value.get<double>();
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else if (key == "output_dir") c.output_dir = value.get<std::string>();
            else if (key == "write_maps") c.write_maps = value.get<bool>();
            else throw ConfigError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return c;
}

RunConfig load_config(const fs::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    std::istringstream lines(text);
    std::string line;
    const std::string marker = "config = ";
    while (std::getline(lines, line)) {
        if (line.rfind(marker, 0) == 0) return config_from_json(line.substr(marker.size()));
    }
    return config_from_json(text);
}

SynthSpec synth_spec_from_json(const std::string& text) {
    try {
        json j = json::parse(text);
        if (j.is_object() && j.contains("synth")) j = j["synth"];
        return synth_from_json_value(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("cannot parse synth spec: ") + e.what());
    }
}

std::string synth_spec_to_json(const SynthSpec& spec) { return synth_to_json_value(spec).dump(2); }

Dataset load_dataset(const RunConfig& config) {
    if (config.synth) {
        SynthScene scene = generate_cube(*config.synth);
        return Dataset{"synth(seed=" + std::to_string(config.synth->seed) + ")", std::move(scene.cube),
                       std::move(scene.gt), std::move(scene.oracle)};
    }
    if (config.cube.empty() || config.gt.empty()) throw ConfigError("dataset missing: give cube and gt paths");
    HyperCube cube = config.raw.empty() ? load_cube(config.cube) : load_cube(config.cube, config.raw);
    GroundTruth gt = load_gt(config.gt, cube.rows(), cube.cols());
    std::string name = fs::path(config.cube).filename().string();
    return Dataset{name, std::move(cube), std::move(gt), std::nullopt};
}

EvalReport classify_bands(const QuantizedCube& qcube, const GroundTruth& gt, std::span<const std::size_t> bands,
                          const RunConfig& config) {
    check_geometry(qcube, gt);
    // Column order follows band index so the result depends only on the band set.
    std::vector<std::size_t> columns(bands.begin(), bands.end());
    std::sort(columns.begin(), columns.end());
    const SplitPlan plan = stratified_split(gt, config.train_fraction, config.seed);
    const FeatureMatrix train = extract_features(qcube, columns, plan.train);
    const FeatureMatrix test = extract_features(qcube, columns, plan.test);
    const auto train_labels = labels_at(gt, plan.train);
    const auto test_labels = labels_at(gt, plan.test);

    std::vector<std::pair<std::string, std::string>> params;
    params.emplace_back("classifier", std::string(classifier_name(config.classifier)));
    std::vector<Label> predicted;
    if (config.classifier == Classifier::Knn) {
        predicted = knn_predict(train, train_labels, test);
    } else {
        const SvmModel model = train_svm(train, train_labels, config.svm_params());
        params.emplace_back("svm_c", num(model.c));
        params.emplace_back("svm_gamma", num(model.gamma));
        params.emplace_back("svm_tol", num(model.tol));
        params.emplace_back("svm_max_iter", std::to_string(config.svm_max_iter));
        predicted = predict(model, test);
    }
    params.emplace_back("train_fraction", num(config.train_fraction));
    params.emplace_back("seed", std::to_string(config.seed));
    params.emplace_back("train_pixels", std::to_string(plan.train.size()));
    params.emplace_back("test_pixels", std::to_string(plan.test.size()));

    EvalReport report = evaluate(predicted, test_labels);
    report.params = std::move(params);
    return report;
}

std::vector<Label> estimated_gt_map(const QuantizedCube& qcube, const GroundTruth& gt,
                                    std::span<const std::size_t> bands) {
    const BandData data(qcube, gt);
    const DiscreteSeries levels = build_estimated_gt(data, bands);
    const DiscreteSeries truth = label_series(gt);

    const JointHistogram h = joint_histogram(levels, truth);
    std::vector<Label> level_class(levels.alphabet(), 0);
    for (std::size_t v = 0; v < levels.alphabet(); ++v) {
        std::uint64_t best = 0;
        for (std::size_t l = 1; l < truth.alphabet(); ++l) {
            if (h.count(v, l) > best) {
                best = h.count(v, l);
                level_class[v] = static_cast<Label>(l);
            }
        }
    }

    std::vector<Label> map(gt.pixels(), 0);
    const auto pixels = labeled_pixels(gt);
    for (std::size_t i = 0; i < pixels.size(); ++i) map[pixels[i]] = level_class[levels[i]];
    return map;
}

namespace {

std::string class_name(const RunConfig& config, Label label) {
    if (label >= 1 && label <= config.class_names.size()) return config.class_names[label - 1u];
    return "class_" + std::to_string(label);
}

std::string join_indices(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

std::string join_scores(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + num(v[i]);
    return s;
}

void append_run_block(std::string& out, const RunConfig& config, const Dataset& dataset) {
    out += "dataset = " + dataset.name + "\n";
    out += "rows = " + std::to_string(dataset.cube.rows()) + "\n";
    out += "cols = " + std::to_string(dataset.cube.cols()) + "\n";
    out += "bands = " + std::to_string(dataset.cube.bands()) + "\n";
    out += "labeled_pixels = " + std::to_string(dataset.gt.labeled_count()) + "\n";
    out += "levels = " + std::to_string(config.levels) + "\n";
    out += "k = " + std::to_string(config.k) + "\n";
    out += "beta = " + num(config.beta) + "\n";
    out += "threshold = " + num(config.threshold) + "\n";
    out += "lambda = " + num(config.lambda) + "\n";
}

}  // namespace

std::string format_selection(const SelectionResult& result, const RunConfig& config, const Dataset& dataset) {
    std::string out = "# igbs selection\n";
    out += "method = " + std::string(method_name(result.method)) + "\n";
    append_run_block(out, config, dataset);
    out += "selected_count = " + std::to_string(result.selected.size()) + "\n";
    out += "selected = " + join_indices(result.selected) + "\n";
    out += "step_scores = " + join_scores(result.step_scores) + "\n";
    out += "config = " + config_to_json(config) + "\n";
    return out;
}

std::string format_report(const MethodOutcome& outcome, const RunConfig& config, const Dataset& dataset,
                          std::string_view method_label) {
    std::string out = "# igbs evaluation report\n";
    out += "method = " + std::string(method_label.empty() ? method_name(outcome.method) : method_label) + "\n";
    out += "status = " + std::string(outcome.error.empty() ? "ok" : "failed") + "\n";
    if (!outcome.error.empty()) out += "error = " + outcome.error + "\n";
    append_run_block(out, config, dataset);
    if (outcome.selection) {
        out += "selected_count = " + std::to_string(outcome.selection->selected.size()) + "\n";
        out += "selected = " + join_indices(outcome.selection->selected) + "\n";
        out += "step_scores = " + join_scores(outcome.selection->step_scores) + "\n";
    }
    if (outcome.report) {
        const EvalReport& r = *outcome.report;
        for (const auto& [key, value] : r.params) out += key + " = " + value + "\n";
        out += "overall_accuracy = " + num(r.overall_accuracy) + "\n";
        out += "kappa = " + num(r.kappa) + "\n";
    }
    out += "config = " + config_to_json(config) + "\n";

    if (outcome.report) {
        const EvalReport& r = *outcome.report;
        const ConfusionMatrix& cm = r.confusion;
        out += "\n[per_class]\nlabel\tname\ttest_pixels\taccuracy\n";
        for (std::size_t i = 0; i < cm.size(); ++i) {
            out += std::to_string(cm.classes[i]) + "\t" + class_name(config, cm.classes[i]) + "\t" +
                   std::to_string(cm.row_sum(i)) + "\t" +
                   (r.class_accuracy[i] ? num(*r.class_accuracy[i]) : std::string("undefined")) + "\n";
        }
        out += "\n[confusion]\ntrue\\pred";
        for (Label l : cm.classes) out += "\t" + std::to_string(l);
        out += "\n";
        for (std::size_t i = 0; i < cm.size(); ++i) {
            out += std::to_string(cm.classes[i]);
            for (std::size_t j = 0; j < cm.size(); ++j) out += "\t" + std::to_string(cm.at(i, j));
            out += "\n";
        }
    }
    return out;
}

std::string format_comparison(const std::vector<MethodOutcome>& outcomes, const RunConfig& config,
                              const Dataset& dataset) {
    std::string out = "# igbs comparison\n";
    append_run_block(out, config, dataset);
    out += "classifier = " + std::string(classifier_name(config.classifier)) + "\n";
    out += "svm_c = " + num(config.svm_c) + "\n";
    out += "svm_gamma = " + (config.svm_gamma > 0.0 ? num(config.svm_gamma) : std::string("1/bands")) + "\n";
    out += "svm_tol = " + num(config.svm_tol) + "\n";
    out += "train_fraction = " + num(config.train_fraction) + "\n";
    out += "seed = " + std::to_string(config.seed) + "\n";
    for (const auto& o : outcomes) {
        if (o.selection) {
            out += "selected_count." + std::string(method_name(o.method)) + " = " +
                   std::to_string(o.selection->selected.size()) + "\n";
        }
    }

    const auto classes = dataset.gt.classes();
    std::size_t name_width = std::string("Kappa(%)").size();
    for (Label l : classes) name_width = std::max(name_width, class_name(config, l).size());
    constexpr std::size_t kCol = 10;

    auto pad_right = [](std::string s, std::size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    auto pad_left = [](std::string s, std::size_t w) {
        if (s.size() < w) s.insert(0, w - s.size(), ' ');
        return s;
    };

    out += "\n[table]\n" + pad_right("Class", name_width);
    for (const auto& o : outcomes) out += pad_left(std::string(method_name(o.method)), kCol);
    out += "\n";

    auto cell = [&](const MethodOutcome& o, auto&& value_of) -> std::string {
        if (!o.error.empty() || !o.report) return "failed";
        const std::optional<double> v = value_of(*o.report);
        return v ? fixed(*v * 100.0, 2) : std::string("n/a");
    };

    for (Label l : classes) {
        out += pad_right(class_name(config, l), name_width);
        for (const auto& o : outcomes) {
            out += pad_left(cell(o,
                                 [&](const EvalReport& r) -> std::optional<double> {
                                     const auto& cls = r.confusion.classes;
                                     auto it = std::lower_bound(cls.begin(), cls.end(), l);
                                     if (it == cls.end() || *it != l) return std::nullopt;
                                     return r.class_accuracy[static_cast<std::size_t>(it - cls.begin())];
                                 }),
                            kCol);
        }
        out += "\n";
    }
    out += pad_right("Kappa(%)", name_width);
    for (const auto& o : outcomes) {
        out += pad_left(cell(o, [](const EvalReport& r) -> std::optional<double> { return r.kappa; }), kCol);
    }
    out += "\n" + pad_right("OA(%)", name_width);
    for (const auto& o : outcomes) {
        out += pad_left(cell(o, [](const EvalReport& r) -> std::optional<double> { return r.overall_accuracy; }),
                        kCol);
    }
    out += "\n";

    bool any_failed = false;
    for (const auto& o : outcomes) any_failed = any_failed || !o.error.empty();
    if (any_failed) {
        out += "\n[failures]\n";
        for (const auto& o : outcomes) {
            if (!o.error.empty()) out += std::string(method_name(o.method)) + " = " + o.error + "\n";
        }
    }
    return out;
}

CompareResult run_compare(const RunConfig& config) {
    validate(config);
    const Dataset dataset = load_dataset(config);
    return run_compare(config, dataset);
}

CompareResult run_compare(const RunConfig& config, const Dataset& dataset) {
    validate(config);
    check_geometry(dataset.cube, dataset.gt);
    if (config.k > dataset.cube.bands()) {
        throw ConfigError("k = " + std::to_string(config.k) + " exceeds the " + std::to_string(dataset.cube.bands()) +
                          " available bands");
    }
    const QuantizedCube qcube = quantize_cube(dataset.cube, config.levels);
    const BandData data(qcube, dataset.gt);

    CompareResult result;
    for (Method method : config.methods) {
        MethodOutcome outcome;
        outcome.method = method;
        try {
            outcome.selection = greedy_select(data, method, config.k, config.selection_params());
            outcome.report = classify_bands(qcube, dataset.gt, outcome.selection->selected, config);
            if (config.write_maps) outcome.map = estimated_gt_map(qcube, dataset.gt, outcome.selection->selected);
        } catch (const std::exception& e) {
            outcome.error = e.what();
            outcome.report.reset();
        }
        result.outcomes.push_back(std::move(outcome));
    }
    result.table = format_comparison(result.outcomes, config, dataset);

    if (!config.output_dir.empty()) {
        const fs::path dir(config.output_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
        for (const auto& o : result.outcomes) {
            const std::string stem(method_name(o.method));
            write_text_file(dir / (stem + ".report.txt"), format_report(o, config, dataset));
            if (!o.map.empty()) export_map(o.map, dataset.gt.rows(), dataset.gt.cols(), dir / (stem + ".map.ppm"));
        }
        write_text_file(dir / "comparison.txt", result.table);
    }
    return result;
}

}  // namespace igbs
