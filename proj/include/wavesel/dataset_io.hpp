#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavesel/features.hpp"
#include "wavesel/ml.hpp"

namespace wavesel {

struct LabeledRow {
    std::int64_t scenario_id = 0;
    FeatureVector features;
    int label = 0;  ///< 1..10
};

/// The ML-facing dataset: one feature row plus class label per scenario,
/// with a provenance fingerprint of the generating configuration.
struct LabeledDataset {
    std::vector<LabeledRow> rows;
    std::uint64_t config_hash = 0;
    std::uint64_t master_seed = 0;

    /// Throws DomainError on duplicate scenario ids or out-of-range labels.
    void validate() const;
};

/// `scenario_id,f1,...,f7,label` with a mandatory header; floats at
/// 9 significant digits.
std::string labeled_csv_header();
void write_csv(const LabeledDataset& dataset, const std::string& path);
LabeledDataset read_csv(const std::string& path);

struct SplitSpec {
    double train_frac = 0.6;
    double val_frac = 0.2;
    double test_frac = 0.2;
    std::uint64_t seed = 1;

    void validate() const;  ///< fractions > 0 summing to 1 within 1e-12
};

struct SplitResult {
    LabeledDataset train;
    LabeledDataset val;
    LabeledDataset test;
};

/// Per-class seeded shuffle followed by a largest-remainder proportional
/// cut. The three outputs partition the input exactly, and every class's
/// share of each split is within one row of exact proportionality.
SplitResult split_stratified(const LabeledDataset& dataset, const SplitSpec& spec);

/// Converts dataset rows to the flat ML form, standardizing with `scaler`.
MlDataset to_ml_dataset(const LabeledDataset& dataset, const Scaler& scaler);

/// Versioned text model format: `model <kind> v1`, an embedded scaler
/// section, then kind-specific named numeric sections at 17 significant
/// digits, closed by an `end` line. Loading a truncated or mismatched file
/// throws LoadError and produces no model.
std::string model_to_text(const Model& model);
Model model_from_text(const std::string& text);
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace wavesel
