#include "wavesel/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "wavesel/errors.hpp"
#include "wavesel/eval.hpp"
#include "wavesel/rng.hpp"
#include "wavesel/text_io.hpp"

namespace wavesel {

namespace {

/// Substream tag separating the balance shuffle from scenario generation.
constexpr std::uint64_t kBalanceStream = 0xba1a'4ce5'eed0'0001ULL;

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        out += std::to_string(values[i]);
    }
    return out;
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        out += format_g9(values[i]);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& key) {
    std::vector<int> out;
    for (const std::string& token : split_csv(text)) {
        out.push_back(static_cast<int>(parse_int(token, "config key " + key)));
    }
    if (out.empty()) {
        throw ConfigError("config key " + key + ": empty list");
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
    std::vector<double> out;
    for (const std::string& token : split_csv(text)) {
        out.push_back(parse_double(token, "config key " + key));
    }
    if (out.empty()) {
        throw ConfigError("config key " + key + ": empty list");
    }
    return out;
}

}  // namespace

void PipelineConfig::validate() const {
    scenario.validate();
    if (!(total_bandwidth_hz > 0.0)) {
        throw ConfigError("total_bandwidth_hz must be positive");
    }
    if (guards.g1_sc15 < 0 || guards.g2_sc15 < 0 || guards.g3_sc15 < 0) {
        throw ConfigError("guard widths must be non-negative");
    }
    weights.validate();
    split.validate();
    if (knn_k < 1) throw ConfigError("knn_k must be >= 1");
    if (tree_max_depth < 0) throw ConfigError("tree_max_depth must be >= 0");
    if (tree_min_leaf < 1) throw ConfigError("tree_min_leaf must be >= 1");
    if (mlp_hidden < 1) throw ConfigError("mlp_hidden must be >= 1");
    if (mlp_epochs < 1) throw ConfigError("mlp_epochs must be >= 1");
    if (!(mlp_lr > 0.0)) throw ConfigError("mlp_lr must be positive");
    if (mlp_momentum < 0.0 || mlp_momentum >= 1.0) {
        throw ConfigError("mlp_momentum must be in [0, 1)");
    }
    if (mlp_patience < 1) throw ConfigError("mlp_patience must be >= 1");
    if (workers < 0) throw ConfigError("workers must be >= 0");
}

LabelerConfig PipelineConfig::labeler_config() const {
    LabelerConfig cfg;
    cfg.classes = class_table(guards);
    cfg.weights = weights;
    cfg.metric.total_bw_hz = total_bandwidth_hz;
    cfg.metric.snr_db = scenario.snr_db;
    return cfg;
}

MlpTrainConfig PipelineConfig::mlp_config() const {
    MlpTrainConfig cfg;
    cfg.hidden = mlp_hidden;
    cfg.epochs = mlp_epochs;
    cfg.lr = mlp_lr;
    cfg.momentum = mlp_momentum;
    cfg.patience = mlp_patience;
    cfg.seed = mlp_seed;
    return cfg;
}

PipelineConfig parse_config_text(const std::string& text) {
    PipelineConfig cfg;
    std::map<std::string, std::string> entries;
    const std::vector<std::string> lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string line = lines[i];
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = strip(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(i + 1) +
                              ": expected 'key = value'");
        }
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("config line " + std::to_string(i + 1) +
                              ": empty key or value");
        }
        if (!entries.emplace(key, value).second) {
            throw ConfigError("config key repeated: " + key);
        }
    }

    const auto take = [&entries](const char* key) -> const std::string* {
        const auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        return &it->second;
    };
    const auto as_int = [&take](const char* key, auto& field) {
        if (const std::string* v = take(key)) {
            field = static_cast<std::decay_t<decltype(field)>>(
                parse_int(*v, std::string("config key ") + key));
        }
    };
    const auto as_double = [&take](const char* key, double& field) {
        if (const std::string* v = take(key)) {
            field = parse_double(*v, std::string("config key ") + key);
        }
    };

    as_int("num_scenarios", cfg.scenario.num_scenarios);
    as_int("users_per_cell", cfg.scenario.users_per_cell);
    as_double("tau_min_s", cfg.scenario.tau_min_s);
    as_double("tau_max_s", cfg.scenario.tau_max_s);
    as_double("doppler_min_hz", cfg.scenario.doppler_min_hz);
    as_double("doppler_max_hz", cfg.scenario.doppler_max_hz);
    as_double("snr_db", cfg.scenario.snr_db);
    as_int("master_seed", cfg.scenario.master_seed);

    as_double("total_bandwidth_hz", cfg.total_bandwidth_hz);
    as_int("guard_g1_sc15", cfg.guards.g1_sc15);
    as_int("guard_g2_sc15", cfg.guards.g2_sc15);
    as_int("guard_g3_sc15", cfg.guards.g3_sc15);

    as_double("w_embb_sinr", cfg.weights.embb.w_sinr);
    as_double("w_embb_se", cfg.weights.embb.w_se);
    as_double("w_embb_flex", cfg.weights.embb.w_flex);
    as_double("w_urllc_sinr", cfg.weights.urllc.w_sinr);
    as_double("w_urllc_se", cfg.weights.urllc.w_se);
    as_double("w_urllc_flex", cfg.weights.urllc.w_flex);
    as_double("w_mmtc_sinr", cfg.weights.mmtc.w_sinr);
    as_double("w_mmtc_se", cfg.weights.mmtc.w_se);
    as_double("w_mmtc_flex", cfg.weights.mmtc.w_flex);
    as_double("w_mixed_sinr", cfg.weights.mixed.w_sinr);
    as_double("w_mixed_se", cfg.weights.mixed.w_se);
    as_double("w_mixed_flex", cfg.weights.mixed.w_flex);

    as_double("train_frac", cfg.split.train_frac);
    as_double("val_frac", cfg.split.val_frac);
    as_double("test_frac", cfg.split.test_frac);
    as_int("split_seed", cfg.split.seed);

    as_int("knn_k", cfg.knn_k);
    as_int("tree_max_depth", cfg.tree_max_depth);
    as_int("tree_min_leaf", cfg.tree_min_leaf);
    as_int("mlp_hidden", cfg.mlp_hidden);
    as_int("mlp_epochs", cfg.mlp_epochs);
    as_double("mlp_lr", cfg.mlp_lr);
    as_double("mlp_momentum", cfg.mlp_momentum);
    as_int("mlp_patience", cfg.mlp_patience);
    as_int("mlp_seed", cfg.mlp_seed);

    if (const std::string* v = take("knn_k_grid")) {
        cfg.knn_k_grid = parse_int_list(*v, "knn_k_grid");
    }
    if (const std::string* v = take("tree_depth_grid")) {
        cfg.tree_depth_grid = parse_int_list(*v, "tree_depth_grid");
    }
    if (const std::string* v = take("mlp_lr_grid")) {
        cfg.mlp_lr_grid = parse_double_list(*v, "mlp_lr_grid");
    }

    as_int("workers", cfg.workers);

    static const char* known[] = {
        "num_scenarios", "users_per_cell", "tau_min_s", "tau_max_s", "doppler_min_hz",
        "doppler_max_hz", "snr_db", "master_seed", "total_bandwidth_hz", "guard_g1_sc15",
        "guard_g2_sc15", "guard_g3_sc15", "w_embb_sinr", "w_embb_se", "w_embb_flex",
        "w_urllc_sinr", "w_urllc_se", "w_urllc_flex", "w_mmtc_sinr", "w_mmtc_se",
        "w_mmtc_flex", "w_mixed_sinr", "w_mixed_se", "w_mixed_flex", "train_frac",
        "val_frac", "test_frac", "split_seed", "knn_k", "tree_max_depth", "tree_min_leaf",
        "mlp_hidden", "mlp_epochs", "mlp_lr", "mlp_momentum", "mlp_patience", "mlp_seed",
        "knn_k_grid", "tree_depth_grid", "mlp_lr_grid", "workers"};
    for (const auto& [key, value] : entries) {
        if (std::find_if(std::begin(known), std::end(known), [&key](const char* k) {
                return key == k;
            }) == std::end(known)) {
            throw ConfigError("unknown config key: " + key);
        }
    }

    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    return parse_config_text(read_file(path));
}

std::string config_to_text(const PipelineConfig& c) {
    std::string out;
    const auto kv = [&out](const char* key, const std::string& value) {
        out += std::string(key) + " = " + value + "\n";
    };
    kv("num_scenarios", std::to_string(c.scenario.num_scenarios));
    kv("users_per_cell", std::to_string(c.scenario.users_per_cell));
    kv("tau_min_s", format_g9(c.scenario.tau_min_s));
    kv("tau_max_s", format_g9(c.scenario.tau_max_s));
    kv("doppler_min_hz", format_g9(c.scenario.doppler_min_hz));
    kv("doppler_max_hz", format_g9(c.scenario.doppler_max_hz));
    kv("snr_db", format_g9(c.scenario.snr_db));
    kv("master_seed", std::to_string(c.scenario.master_seed));
    kv("total_bandwidth_hz", format_g9(c.total_bandwidth_hz));
    kv("guard_g1_sc15", std::to_string(c.guards.g1_sc15));
    kv("guard_g2_sc15", std::to_string(c.guards.g2_sc15));
    kv("guard_g3_sc15", std::to_string(c.guards.g3_sc15));
    kv("w_embb_sinr", format_g9(c.weights.embb.w_sinr));
    kv("w_embb_se", format_g9(c.weights.embb.w_se));
    kv("w_embb_flex", format_g9(c.weights.embb.w_flex));
    kv("w_urllc_sinr", format_g9(c.weights.urllc.w_sinr));
    kv("w_urllc_se", format_g9(c.weights.urllc.w_se));
    kv("w_urllc_flex", format_g9(c.weights.urllc.w_flex));
    kv("w_mmtc_sinr", format_g9(c.weights.mmtc.w_sinr));
    kv("w_mmtc_se", format_g9(c.weights.mmtc.w_se));
    kv("w_mmtc_flex", format_g9(c.weights.mmtc.w_flex));
    kv("w_mixed_sinr", format_g9(c.weights.mixed.w_sinr));
    kv("w_mixed_se", format_g9(c.weights.mixed.w_se));
    kv("w_mixed_flex", format_g9(c.weights.mixed.w_flex));
    kv("train_frac", format_g9(c.split.train_frac));
    kv("val_frac", format_g9(c.split.val_frac));
    kv("test_frac", format_g9(c.split.test_frac));
    kv("split_seed", std::to_string(c.split.seed));
    kv("knn_k", std::to_string(c.knn_k));
    kv("tree_max_depth", std::to_string(c.tree_max_depth));
    kv("tree_min_leaf", std::to_string(c.tree_min_leaf));
    kv("mlp_hidden", std::to_string(c.mlp_hidden));
    kv("mlp_epochs", std::to_string(c.mlp_epochs));
    kv("mlp_lr", format_g9(c.mlp_lr));
    kv("mlp_momentum", format_g9(c.mlp_momentum));
    kv("mlp_patience", std::to_string(c.mlp_patience));
    kv("mlp_seed", std::to_string(c.mlp_seed));
    kv("knn_k_grid", join_ints(c.knn_k_grid));
    kv("tree_depth_grid", join_ints(c.tree_depth_grid));
    kv("mlp_lr_grid", join_doubles(c.mlp_lr_grid));
    kv("workers", std::to_string(c.workers));
    return out;
}

std::uint64_t config_hash(const PipelineConfig& config) {
    // The worker count shapes execution, not results; keep it out of the
    // provenance fingerprint.
    PipelineConfig canonical = config;
    canonical.workers = 0;
    return fnv1a64(config_to_text(canonical));
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    std::size_t thread_count = workers > 0
                                   ? static_cast<std::size_t>(workers)
                                   : std::max(1u, std::thread::hardware_concurrency());
    thread_count = std::min(thread_count, n);
    if (thread_count == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

void run_generate(const PipelineConfig& config, const std::string& out_path) {
    config.validate();
    const std::size_t n = static_cast<std::size_t>(config.scenario.num_scenarios);
    std::vector<CellScenario> scenarios(n);
    parallel_for(n, config.workers, [&](std::size_t i) {
        scenarios[i] = generate_scenario(config.scenario, static_cast<std::int64_t>(i));
    });
    write_raw_csv(scenarios, out_path);
}

void run_label(const PipelineConfig& config, const std::string& in_path,
               const std::string& out_path) {
    config.validate();
    const std::vector<CellScenario> scenarios = read_raw_csv(in_path);
    const LabelerConfig labeler_cfg = config.labeler_config();

    std::vector<LabeledScenario> labeled(scenarios.size());
    parallel_for(scenarios.size(), config.workers, [&](std::size_t i) {
        labeled[i] = label_scenario(scenarios[i], labeler_cfg);
    });

    const std::vector<LabeledScenario> balanced =
        balance_dataset(labeled, substream_seed(config.scenario.master_seed, kBalanceStream));

    LabeledDataset dataset;
    dataset.config_hash = config_hash(config);
    dataset.master_seed = config.scenario.master_seed;
    dataset.rows.reserve(balanced.size());
    for (const LabeledScenario& row : balanced) {
        dataset.rows.push_back(LabeledRow{row.scenario_id, row.features, row.label});
    }
    write_csv(dataset, out_path);
}

void run_split(const PipelineConfig& config, const std::string& in_path,
               const std::string& out_prefix) {
    config.validate();
    const LabeledDataset dataset = read_csv(in_path);
    const SplitResult split = split_stratified(dataset, config.split);
    write_csv(split.train, out_prefix + "_train.csv");
    write_csv(split.val, out_prefix + "_val.csv");
    write_csv(split.test, out_prefix + "_test.csv");
}

void run_train(const PipelineConfig& config, const std::string& kind,
               const std::string& train_path, const std::string& val_path,
               const std::string& out_path, bool tune) {
    config.validate();
    const ModelKind model_kind = model_kind_from_name(kind);
    const LabeledDataset train_rows = read_csv(train_path);
    const LabeledDataset val_rows = read_csv(val_path);

    std::vector<FeatureVector> train_features;
    train_features.reserve(train_rows.rows.size());
    for (const LabeledRow& row : train_rows.rows) {
        train_features.push_back(row.features);
    }
    const Scaler scaler = fit_scaler(train_features);
    const MlDataset ml_train = to_ml_dataset(train_rows, scaler);
    const MlDataset ml_val = to_ml_dataset(val_rows, scaler);

    Model model;
    model.scaler = scaler;
    switch (model_kind) {
        case ModelKind::KNN: {
            const int k = tune ? tune_knn_k(ml_train, ml_val, config.knn_k_grid) : config.knn_k;
            model.impl = knn_fit(ml_train, k);
            break;
        }
        case ModelKind::NB: {
            model.impl = nb_fit(ml_train);
            break;
        }
        case ModelKind::TREE: {
            int depth = config.tree_max_depth;
            if (tune) {
                std::vector<int> grid = config.tree_depth_grid;
                for (int& d : grid) {
                    if (d == 0) d = kUnlimitedDepth;
                }
                depth = tune_tree_depth(ml_train, ml_val, grid, config.tree_min_leaf);
            }
            if (depth == 0) depth = kUnlimitedDepth;
            model.impl = tree_fit(ml_train, depth, config.tree_min_leaf);
            break;
        }
        case ModelKind::MLP: {
            MlpTrainConfig mlp_cfg = config.mlp_config();
            if (tune) {
                mlp_cfg.lr = tune_mlp_lr(ml_train, ml_val, config.mlp_lr_grid, mlp_cfg);
            }
            model.impl = mlp_fit(ml_train, ml_val, mlp_cfg);
            break;
        }
    }
    save_model(model, out_path);
}

EvaluateResult run_evaluate(const PipelineConfig& config, const std::string& model_path,
                            const std::string& test_path, const std::string& out_prefix) {
    config.validate();
    const Model model = load_model(model_path);
    const LabeledDataset test = read_csv(test_path);
    if (test.rows.empty()) {
        throw DomainError("test set is empty");
    }

    std::vector<int> truth;
    std::vector<int> predicted;
    std::vector<ProbArray> probs;
    truth.reserve(test.rows.size());
    predicted.reserve(test.rows.size());
    probs.reserve(test.rows.size());
    for (const LabeledRow& row : test.rows) {
        truth.push_back(row.label);
        probs.push_back(predict_proba(model, row.features));
        predicted.push_back(predict_from_proba(probs.back()));
    }

    const ConfusionMatrix cm = confusion(truth, predicted);
    const RocCurve roc = roc_ovr(truth, probs);

    EvaluateResult result;
    result.fine_accuracy = accuracy(cm);
    result.grouped_accuracy = grouped_accuracy(truth, predicted, default_grouping());
    result.macro_auc = roc.macro_auc;

    atomic_write_file(out_prefix + "_confusion.csv", confusion_to_csv(cm));
    atomic_write_file(out_prefix + "_roc.csv", roc_to_csv(roc));

    std::string summary;
    summary += std::string("model ") + model_kind_name(model.kind()) + "\n";
    summary += "test_rows " + std::to_string(test.rows.size()) + "\n";
    summary += "fine_accuracy " + format_g9(result.fine_accuracy) + "\n";
    summary += "grouped_accuracy " + format_g9(result.grouped_accuracy) + "\n";
    summary += "macro_auc " + format_g9(result.macro_auc) + "\n";
    if (roc.has_absent_class) {
        summary += "warning some classes absent from the test truth; their AUC is excluded\n";
    }
    atomic_write_file(out_prefix + "_summary.txt", summary);
    return result;
}

std::string run_predict(const std::string& model_path, const std::string& features_csv) {
    const Model model = load_model(model_path);
    const std::vector<std::string> tokens = split_csv(features_csv);
    if (tokens.size() != kNumFeatures) {
        throw DomainError("expected " + std::to_string(kNumFeatures) +
                          " comma-separated feature values");
    }
    std::array<double, kNumFeatures> x{};
    for (int i = 0; i < kNumFeatures; ++i) {
        x[static_cast<std::size_t>(i)] =
            parse_double(tokens[static_cast<std::size_t>(i)], "feature vector");
    }
    const FeatureVector features = FeatureVector::from_array(x);
    const ProbArray proba = predict_proba(model, features);
    const int label = predict_from_proba(proba);

    std::string out = "label " + std::to_string(label) + "\n";
    out += "proba";
    for (double p : proba) {
        out += " " + format_g9(p);
    }
    out += "\n";
    return out;
}

}  // namespace wavesel
