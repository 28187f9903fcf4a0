#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

#include "wavesel/core_model.hpp"
#include "wavesel/features.hpp"

namespace wavesel {

using Sample = std::array<double, kNumFeatures>;
using ProbArray = std::array<double, kNumClasses>;

/// Flat training/evaluation set: feature rows (standardized for KNN and the
/// MLP) and labels in 1..10.
struct MlDataset {
    std::vector<Sample> x;
    std::vector<int> y;

    std::size_t size() const { return x.size(); }
};

/// Label with the highest probability; ties go to the lowest label.
int predict_from_proba(const ProbArray& proba);

// ---------------------------------------------------------------------------
// k-nearest-neighbors

struct KnnModel {
    int k = 5;
    std::vector<Sample> points;
    std::vector<int> labels;
};

KnnModel knn_fit(const MlDataset& train, int k);

/// Vote fractions among the k nearest by Euclidean distance. Distance ties
/// are broken by lower training-row index.
ProbArray knn_predict_proba(const KnnModel& model, const Sample& x);

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

struct NbModel {
    ProbArray log_prior{};
    std::array<Sample, kNumClasses> mean{};
    std::array<Sample, kNumClasses> var{};
};

/// Per-class variance floor; keeps zero-variance features finite.
inline constexpr double kNbVarianceFloor = 1e-9;

/// Fits per-class Gaussian feature models. Every label 1..10 must be
/// present in the training data.
NbModel nb_fit(const MlDataset& train);

/// Log-domain Gaussian likelihoods, softmax-normalized posteriors.
ProbArray nb_predict_proba(const NbModel& model, const Sample& x);

// ---------------------------------------------------------------------------
// CART decision tree

struct TreeNode {
    int feature = -1;        ///< -1 marks a leaf
    double threshold = 0.0;  ///< go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    ProbArray prob{};        ///< leaf class histogram, normalized
};

struct TreeModel {
    std::vector<TreeNode> nodes;  ///< node 0 is the root
    int max_depth = 0;
    int min_leaf = 1;
};

inline constexpr int kUnlimitedDepth = std::numeric_limits<int>::max();

/// Gini impurity of a class-count histogram.
double gini_impurity(const ProbArray& counts);

/// Greedy CART: best (feature, threshold) split by weighted Gini impurity,
/// candidate thresholds at midpoints of consecutive distinct sorted values,
/// stopping on purity, depth, or min_leaf. Ties break to the lowest feature
/// index, then the lowest threshold.
TreeModel tree_fit(const MlDataset& train, int max_depth, int min_leaf);

ProbArray tree_predict_proba(const TreeModel& model, const Sample& x);

// ---------------------------------------------------------------------------
// One-hidden-layer MLP, 7 -> hidden (tanh) -> 10 (softmax)

struct MlpModel {
    int hidden = 20;
    std::vector<double> w1;  ///< hidden x 7, row-major
    std::vector<double> b1;  ///< hidden
    std::vector<double> w2;  ///< 10 x hidden, row-major
    std::vector<double> b2;  ///< 10
};

struct MlpTrainConfig {
    int hidden = 20;
    int epochs = 500;
    double lr = 0.05;
    double momentum = 0.9;
    int patience = 20;
    std::uint64_t seed = 1;
};

/// Fresh network with all parameters uniform in [-0.5, 0.5] from the seed.
MlpModel mlp_init(int hidden, std::uint64_t seed);

/// Full-batch gradient descent with momentum on the cross-entropy loss,
/// early-stopped on validation loss. Deterministic given the seed. Throws
/// DivergenceError when the loss leaves the finite range.
MlpModel mlp_fit(const MlDataset& train, const MlDataset& val, const MlpTrainConfig& config);

ProbArray mlp_predict_proba(const MlpModel& model, const Sample& x);

/// Mean cross-entropy of the model on a dataset.
double mlp_loss(const MlpModel& model, const MlDataset& data);

/// Parameter vector in the fixed order w1, b1, w2, b2.
std::vector<double> mlp_flat_params(const MlpModel& model);
void mlp_set_flat_params(MlpModel& model, const std::vector<double>& params);

/// Mean-loss gradient via backpropagation, flattened like mlp_flat_params.
std::vector<double> mlp_backprop_gradients(const MlpModel& model, const MlDataset& batch);

/// Central finite differences of the mean loss, same layout.
std::vector<double> mlp_numeric_gradients(const MlpModel& model, const MlDataset& batch,
                                          double step);

/// Max over parameters of |ga-gn| / max(1e-8, |ga|+|gn|) between the
/// backpropagated and central-difference gradients (step 1e-5).
double gradient_check(const MlpModel& model, const MlDataset& batch);

// ---------------------------------------------------------------------------
// Unified model handle

enum class ModelKind { KNN, NB, TREE, MLP };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

/// A trained classifier plus the scaler its features were standardized
/// with. predict/predict_proba take raw (unscaled) feature vectors.
struct Model {
    Scaler scaler;
    std::variant<KnnModel, NbModel, TreeModel, MlpModel> impl;

    ModelKind kind() const { return static_cast<ModelKind>(impl.index()); }
};

ProbArray predict_proba(const Model& model, const FeatureVector& features);
int predict(const Model& model, const FeatureVector& features);

// ---------------------------------------------------------------------------
// Hyperparameter grids (selection on validation accuracy; ties take the
// earlier grid entry)

int tune_knn_k(const MlDataset& train, const MlDataset& val, const std::vector<int>& ks);
int tune_tree_depth(const MlDataset& train, const MlDataset& val,
                    const std::vector<int>& depths, int min_leaf);
double tune_mlp_lr(const MlDataset& train, const MlDataset& val,
                   const std::vector<double>& lrs, const MlpTrainConfig& base);

}  // namespace wavesel
