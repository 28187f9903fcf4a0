#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wavesel/dataset_io.hpp"
#include "wavesel/labeler.hpp"
#include "wavesel/scenario.hpp"

namespace wavesel {

/// Flat key = value configuration for the whole pipeline. Every key has a
/// default; unknown keys are rejected at parse time.
struct PipelineConfig {
    ScenarioConfig scenario;

    double total_bandwidth_hz = 20e6;
    GuardWidths guards;
    WeightTable weights;

    SplitSpec split;

    int knn_k = 5;
    int tree_max_depth = 10;  ///< 0 means unlimited
    int tree_min_leaf = 1;
    int mlp_hidden = 20;
    int mlp_epochs = 500;
    double mlp_lr = 0.05;
    double mlp_momentum = 0.9;
    int mlp_patience = 20;
    std::uint64_t mlp_seed = 1;

    std::vector<int> knn_k_grid = {3, 5, 7, 9};
    std::vector<int> tree_depth_grid = {4, 6, 8, 10, 0};  ///< 0 = unlimited
    std::vector<double> mlp_lr_grid = {0.01, 0.05, 0.1};

    int workers = 0;  ///< 0 = hardware concurrency

    void validate() const;
    LabelerConfig labeler_config() const;
    MlpTrainConfig mlp_config() const;
};

/// Parses a line-oriented `key = value` document with `#` comments.
/// Unknown keys raise ConfigError naming the key.
PipelineConfig parse_config_text(const std::string& text);
PipelineConfig load_config(const std::string& path);

/// Canonical serialization (fixed key order); basis of the provenance hash.
std::string config_to_text(const PipelineConfig& config);
std::uint64_t config_hash(const PipelineConfig& config);

/// Runs fn(0..n-1) on a worker pool. Results must go to per-index slots;
/// that keeps output independent of the worker count.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

// Subcommand bodies. All outputs are written atomically.
void run_generate(const PipelineConfig& config, const std::string& out_path);
void run_label(const PipelineConfig& config, const std::string& in_path,
               const std::string& out_path);
void run_split(const PipelineConfig& config, const std::string& in_path,
               const std::string& out_prefix);
void run_train(const PipelineConfig& config, const std::string& kind,
               const std::string& train_path, const std::string& val_path,
               const std::string& out_path, bool tune);

struct EvaluateResult {
    double fine_accuracy = 0.0;
    double grouped_accuracy = 0.0;
    double macro_auc = 0.0;
};

EvaluateResult run_evaluate(const PipelineConfig& config, const std::string& model_path,
                            const std::string& test_path, const std::string& out_prefix);

/// Classifies one raw feature vector ("v1,...,v7"); returns the printable
/// label + distribution report.
std::string run_predict(const std::string& model_path, const std::string& features_csv);

}  // namespace wavesel
