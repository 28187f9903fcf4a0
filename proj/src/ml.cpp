#include "wavesel/ml.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wavesel/errors.hpp"
#include "wavesel/rng.hpp"

namespace wavesel {

namespace {

void check_labels(const MlDataset& data) {
    if (data.x.size() != data.y.size()) {
        throw FitError("feature and label counts differ");
    }
    for (int label : data.y) {
        if (label < 1 || label > kNumClasses) {
            throw FitError("label out of range: " + std::to_string(label));
        }
    }
}

double squared_distance(const Sample& a, const Sample& b) {
    double d = 0.0;
    for (int i = 0; i < kNumFeatures; ++i) {
        const double diff = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
        d += diff * diff;
    }
    return d;
}

void softmax_inplace(ProbArray& logits) {
    const double m = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double& v : logits) {
        v = std::exp(v - m);
        sum += v;
    }
    for (double& v : logits) {
        v /= sum;
    }
}

}  // namespace

int predict_from_proba(const ProbArray& proba) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (proba[static_cast<std::size_t>(c)] > proba[static_cast<std::size_t>(best)]) {
            best = c;
        }
    }
    return best + 1;
}

// ---------------------------------------------------------------------------
// KNN

KnnModel knn_fit(const MlDataset& train, int k) {
    check_labels(train);
    if (k <= 0) {
        throw ConfigError("knn: k must be positive");
    }
    if (static_cast<std::size_t>(k) > train.size()) {
        throw ConfigError("knn: k exceeds the training-set size");
    }
    return KnnModel{k, train.x, train.y};
}

ProbArray knn_predict_proba(const KnnModel& model, const Sample& x) {
    const std::size_t n = model.points.size();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        dist[i] = {squared_distance(model.points[i], x), i};
    }
    const std::size_t k = static_cast<std::size_t>(model.k);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    ProbArray proba{};
    for (std::size_t i = 0; i < k; ++i) {
        proba[static_cast<std::size_t>(model.labels[dist[i].second] - 1)] += 1.0;
    }
    for (double& p : proba) {
        p /= static_cast<double>(k);
    }
    return proba;
}

// ---------------------------------------------------------------------------
// Naive Bayes

NbModel nb_fit(const MlDataset& train) {
    check_labels(train);
    if (train.size() == 0) {
        throw FitError("nb: empty training set");
    }
    std::array<double, kNumClasses> count{};
    NbModel model;
    for (std::size_t i = 0; i < train.size(); ++i) {
        const std::size_t c = static_cast<std::size_t>(train.y[i] - 1);
        count[c] += 1.0;
        for (int f = 0; f < kNumFeatures; ++f) {
            model.mean[c][static_cast<std::size_t>(f)] += train.x[i][static_cast<std::size_t>(f)];
        }
    }
    for (int c = 0; c < kNumClasses; ++c) {
        if (count[static_cast<std::size_t>(c)] == 0.0) {
            throw FitError("nb: class " + std::to_string(c + 1) + " absent from training data");
        }
        for (int f = 0; f < kNumFeatures; ++f) {
            model.mean[static_cast<std::size_t>(c)][static_cast<std::size_t>(f)] /=
                count[static_cast<std::size_t>(c)];
        }
    }
    for (std::size_t i = 0; i < train.size(); ++i) {
        const std::size_t c = static_cast<std::size_t>(train.y[i] - 1);
        for (int f = 0; f < kNumFeatures; ++f) {
            const double d = train.x[i][static_cast<std::size_t>(f)] -
                             model.mean[c][static_cast<std::size_t>(f)];
            model.var[c][static_cast<std::size_t>(f)] += d * d;
        }
    }
    const double total = static_cast<double>(train.size());
    for (int c = 0; c < kNumClasses; ++c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        model.log_prior[cc] = std::log(count[cc] / total);
        for (int f = 0; f < kNumFeatures; ++f) {
            model.var[cc][static_cast<std::size_t>(f)] = std::max(
                kNbVarianceFloor, model.var[cc][static_cast<std::size_t>(f)] / count[cc]);
        }
    }
    return model;
}

ProbArray nb_predict_proba(const NbModel& model, const Sample& x) {
    ProbArray log_post{};
    for (int c = 0; c < kNumClasses; ++c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        double lp = model.log_prior[cc];
        for (int f = 0; f < kNumFeatures; ++f) {
            const std::size_t ff = static_cast<std::size_t>(f);
            const double var = model.var[cc][ff];
            const double d = x[ff] - model.mean[cc][ff];
            lp += -0.5 * std::log(2.0 * 3.141592653589793 * var) - d * d / (2.0 * var);
        }
        log_post[cc] = lp;
    }
    softmax_inplace(log_post);
    return log_post;
}

// ---------------------------------------------------------------------------
// Decision tree

double gini_impurity(const ProbArray& counts) {
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    if (total <= 0.0) {
        return 0.0;
    }
    double sum_sq = 0.0;
    for (double c : counts) {
        const double p = c / total;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

namespace {

struct TreeBuilder {
    const MlDataset& data;
    int max_depth;
    int min_leaf;
    std::vector<TreeNode> nodes;

    int build(std::vector<std::size_t> indices, int depth) {
        ProbArray counts{};
        for (std::size_t i : indices) {
            counts[static_cast<std::size_t>(data.y[i] - 1)] += 1.0;
        }
        const double n = static_cast<double>(indices.size());

        const int node_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        {
            TreeNode& node = nodes.back();
            for (int c = 0; c < kNumClasses; ++c) {
                node.prob[static_cast<std::size_t>(c)] = counts[static_cast<std::size_t>(c)] / n;
            }
        }

        const bool pure = gini_impurity(counts) == 0.0;
        if (pure || depth >= max_depth ||
            indices.size() < 2 * static_cast<std::size_t>(min_leaf)) {
            return node_id;
        }

        // Best split: minimal weighted Gini, ties to the lowest feature then
        // the lowest threshold (the scan order guarantees both).
        int best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = std::numeric_limits<double>::infinity();

        std::vector<std::size_t> sorted = indices;
        for (int f = 0; f < kNumFeatures; ++f) {
            const std::size_t ff = static_cast<std::size_t>(f);
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return data.x[a][ff] < data.x[b][ff];
            });
            ProbArray left{};
            double n_left = 0.0;
            for (std::size_t pos = 0; pos + 1 < sorted.size(); ++pos) {
                left[static_cast<std::size_t>(data.y[sorted[pos]] - 1)] += 1.0;
                n_left += 1.0;
                const double v = data.x[sorted[pos]][ff];
                const double next = data.x[sorted[pos + 1]][ff];
                if (v == next) {
                    continue;
                }
                const double threshold = 0.5 * (v + next);
                // Midpoints can round onto a boundary value; such a
                // candidate would not separate the two samples.
                if (!(threshold >= v) || threshold >= next) {
                    continue;
                }
                const double n_right = n - n_left;
                if (n_left < min_leaf || n_right < min_leaf) {
                    continue;
                }
                ProbArray right{};
                for (int c = 0; c < kNumClasses; ++c) {
                    right[static_cast<std::size_t>(c)] =
                        counts[static_cast<std::size_t>(c)] - left[static_cast<std::size_t>(c)];
                }
                const double weighted =
                    (n_left * gini_impurity(left) + n_right * gini_impurity(right)) / n;
                if (weighted < best_impurity) {
                    best_impurity = weighted;
                    best_feature = f;
                    best_threshold = threshold;
                }
            }
        }

        if (best_feature < 0) {
            return node_id;  // no separating candidate (identical rows)
        }

        std::vector<std::size_t> left_idx;
        std::vector<std::size_t> right_idx;
        for (std::size_t i : indices) {
            if (data.x[i][static_cast<std::size_t>(best_feature)] <= best_threshold) {
                left_idx.push_back(i);
            } else {
                right_idx.push_back(i);
            }
        }
        indices.clear();
        indices.shrink_to_fit();

        const int left_id = build(std::move(left_idx), depth + 1);
        const int right_id = build(std::move(right_idx), depth + 1);
        nodes[static_cast<std::size_t>(node_id)].feature = best_feature;
        nodes[static_cast<std::size_t>(node_id)].threshold = best_threshold;
        nodes[static_cast<std::size_t>(node_id)].left = left_id;
        nodes[static_cast<std::size_t>(node_id)].right = right_id;
        return node_id;
    }
};

}  // namespace

TreeModel tree_fit(const MlDataset& train, int max_depth, int min_leaf) {
    check_labels(train);
    if (train.size() == 0) {
        throw FitError("tree: empty training set");
    }
    if (max_depth < 1) {
        throw ConfigError("tree: max_depth must be >= 1");
    }
    if (min_leaf < 1) {
        throw ConfigError("tree: min_leaf must be >= 1");
    }
    TreeBuilder builder{train, max_depth, min_leaf, {}};
    std::vector<std::size_t> indices(train.size());
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    builder.build(std::move(indices), 0);

    TreeModel model;
    model.nodes = std::move(builder.nodes);
    model.max_depth = max_depth;
    model.min_leaf = min_leaf;
    return model;
}

ProbArray tree_predict_proba(const TreeModel& model, const Sample& x) {
    const TreeNode* node = &model.nodes[0];
    while (node->feature >= 0) {
        node = x[static_cast<std::size_t>(node->feature)] <= node->threshold
                   ? &model.nodes[static_cast<std::size_t>(node->left)]
                   : &model.nodes[static_cast<std::size_t>(node->right)];
    }
    return node->prob;
}

// ---------------------------------------------------------------------------
// MLP

MlpModel mlp_init(int hidden, std::uint64_t seed) {
    if (hidden < 1) {
        throw ConfigError("mlp: hidden size must be >= 1");
    }
    MlpModel m;
    m.hidden = hidden;
    m.w1.resize(static_cast<std::size_t>(hidden) * kNumFeatures);
    m.b1.resize(static_cast<std::size_t>(hidden));
    m.w2.resize(static_cast<std::size_t>(kNumClasses) * static_cast<std::size_t>(hidden));
    m.b2.resize(kNumClasses);
    Rng rng(seed);
    for (double& w : m.w1) w = rng.uniform(-0.5, 0.5);
    for (double& w : m.b1) w = rng.uniform(-0.5, 0.5);
    for (double& w : m.w2) w = rng.uniform(-0.5, 0.5);
    for (double& w : m.b2) w = rng.uniform(-0.5, 0.5);
    return m;
}

namespace {

struct Forward {
    std::vector<double> a1;  // hidden activations
    ProbArray proba{};
};

Forward mlp_forward(const MlpModel& m, const Sample& x) {
    Forward f;
    const std::size_t h = static_cast<std::size_t>(m.hidden);
    f.a1.resize(h);
    for (std::size_t j = 0; j < h; ++j) {
        double z = m.b1[j];
        for (int i = 0; i < kNumFeatures; ++i) {
            z += m.w1[j * kNumFeatures + static_cast<std::size_t>(i)] *
                 x[static_cast<std::size_t>(i)];
        }
        f.a1[j] = std::tanh(z);
    }
    for (int c = 0; c < kNumClasses; ++c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        double z = m.b2[cc];
        for (std::size_t j = 0; j < h; ++j) {
            z += m.w2[cc * h + j] * f.a1[j];
        }
        f.proba[cc] = z;
    }
    softmax_inplace(f.proba);
    return f;
}

struct Gradients {
    std::vector<double> w1, b1, w2, b2;

    explicit Gradients(const MlpModel& m)
        : w1(m.w1.size(), 0.0), b1(m.b1.size(), 0.0), w2(m.w2.size(), 0.0), b2(m.b2.size(), 0.0) {}
};

/// Accumulates the mean cross-entropy gradient over the batch. Returns the
/// mean loss.
double mlp_backward(const MlpModel& m, const MlDataset& batch, Gradients& g) {
    const std::size_t h = static_cast<std::size_t>(m.hidden);
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    for (std::size_t s = 0; s < batch.size(); ++s) {
        const Sample& x = batch.x[s];
        const Forward f = mlp_forward(m, x);
        const std::size_t target = static_cast<std::size_t>(batch.y[s] - 1);
        loss += -std::log(std::max(f.proba[target], 1e-300));

        ProbArray dz2 = f.proba;
        dz2[target] -= 1.0;

        std::vector<double> da1(h, 0.0);
        for (int c = 0; c < kNumClasses; ++c) {
            const std::size_t cc = static_cast<std::size_t>(c);
            const double d = dz2[cc] * inv_n;
            g.b2[cc] += d;
            for (std::size_t j = 0; j < h; ++j) {
                g.w2[cc * h + j] += d * f.a1[j];
                da1[j] += dz2[cc] * m.w2[cc * h + j];
            }
        }
        for (std::size_t j = 0; j < h; ++j) {
            const double dz1 = da1[j] * (1.0 - f.a1[j] * f.a1[j]) * inv_n;
            g.b1[j] += dz1;
            for (int i = 0; i < kNumFeatures; ++i) {
                g.w1[j * kNumFeatures + static_cast<std::size_t>(i)] +=
                    dz1 * x[static_cast<std::size_t>(i)];
            }
        }
    }
    return loss * inv_n;
}

}  // namespace

double mlp_loss(const MlpModel& model, const MlDataset& data) {
    if (data.size() == 0) {
        throw DomainError("mlp_loss: empty dataset");
    }
    double loss = 0.0;
    for (std::size_t s = 0; s < data.size(); ++s) {
        const Forward f = mlp_forward(model, data.x[s]);
        loss += -std::log(std::max(f.proba[static_cast<std::size_t>(data.y[s] - 1)], 1e-300));
    }
    return loss / static_cast<double>(data.size());
}

MlpModel mlp_fit(const MlDataset& train, const MlDataset& val, const MlpTrainConfig& config) {
    check_labels(train);
    check_labels(val);
    if (train.size() == 0 || val.size() == 0) {
        throw FitError("mlp: empty training or validation set");
    }

    MlpModel model = mlp_init(config.hidden, config.seed);
    Gradients velocity(model);

    MlpModel best = model;
    double best_val_loss = mlp_loss(model, val);
    int best_epoch = -1;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        Gradients grad(model);
        const double train_loss = mlp_backward(model, train, grad);
        if (!std::isfinite(train_loss)) {
            throw DivergenceError("mlp: non-finite loss at epoch " + std::to_string(epoch) +
                                  " with lr " + std::to_string(config.lr));
        }

        const auto step = [&](std::vector<double>& w, std::vector<double>& v,
                              const std::vector<double>& g) {
            for (std::size_t i = 0; i < w.size(); ++i) {
                v[i] = config.momentum * v[i] - config.lr * g[i];
                w[i] += v[i];
            }
        };
        step(model.w1, velocity.w1, grad.w1);
        step(model.b1, velocity.b1, grad.b1);
        step(model.w2, velocity.w2, grad.w2);
        step(model.b2, velocity.b2, grad.b2);

        const double val_loss = mlp_loss(model, val);
        if (!std::isfinite(val_loss)) {
            throw DivergenceError("mlp: non-finite validation loss at epoch " +
                                  std::to_string(epoch) + " with lr " + std::to_string(config.lr));
        }
        if (val_loss < best_val_loss) {
            best_val_loss = val_loss;
            best = model;
            best_epoch = epoch;
        } else if (epoch - best_epoch >= config.patience) {
            break;
        }
    }
    return best;
}

ProbArray mlp_predict_proba(const MlpModel& model, const Sample& x) {
    return mlp_forward(model, x).proba;
}

std::vector<double> mlp_flat_params(const MlpModel& model) {
    std::vector<double> p;
    p.reserve(model.w1.size() + model.b1.size() + model.w2.size() + model.b2.size());
    p.insert(p.end(), model.w1.begin(), model.w1.end());
    p.insert(p.end(), model.b1.begin(), model.b1.end());
    p.insert(p.end(), model.w2.begin(), model.w2.end());
    p.insert(p.end(), model.b2.begin(), model.b2.end());
    return p;
}

void mlp_set_flat_params(MlpModel& model, const std::vector<double>& params) {
    const std::size_t expected =
        model.w1.size() + model.b1.size() + model.w2.size() + model.b2.size();
    if (params.size() != expected) {
        throw DomainError("mlp: parameter vector size mismatch");
    }
    std::size_t pos = 0;
    const auto take = [&](std::vector<double>& dst) {
        std::copy(params.begin() + static_cast<std::ptrdiff_t>(pos),
                  params.begin() + static_cast<std::ptrdiff_t>(pos + dst.size()), dst.begin());
        pos += dst.size();
    };
    take(model.w1);
    take(model.b1);
    take(model.w2);
    take(model.b2);
}

std::vector<double> mlp_backprop_gradients(const MlpModel& model, const MlDataset& batch) {
    if (batch.size() == 0) {
        throw DomainError("gradient batch is empty");
    }
    Gradients g(model);
    mlp_backward(model, batch, g);
    std::vector<double> flat;
    flat.reserve(g.w1.size() + g.b1.size() + g.w2.size() + g.b2.size());
    flat.insert(flat.end(), g.w1.begin(), g.w1.end());
    flat.insert(flat.end(), g.b1.begin(), g.b1.end());
    flat.insert(flat.end(), g.w2.begin(), g.w2.end());
    flat.insert(flat.end(), g.b2.begin(), g.b2.end());
    return flat;
}

std::vector<double> mlp_numeric_gradients(const MlpModel& model, const MlDataset& batch,
                                          double step) {
    if (batch.size() == 0) {
        throw DomainError("gradient batch is empty");
    }
    MlpModel probe = model;
    std::vector<double> params = mlp_flat_params(model);
    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double original = params[i];
        params[i] = original + step;
        mlp_set_flat_params(probe, params);
        const double up = mlp_loss(probe, batch);
        params[i] = original - step;
        mlp_set_flat_params(probe, params);
        const double down = mlp_loss(probe, batch);
        params[i] = original;
        grad[i] = (up - down) / (2.0 * step);
    }
    mlp_set_flat_params(probe, params);
    return grad;
}

double gradient_check(const MlpModel& model, const MlDataset& batch) {
    const std::vector<double> analytic = mlp_backprop_gradients(model, batch);
    const std::vector<double> numeric = mlp_numeric_gradients(model, batch, 1e-5);
    double max_err = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double denom = std::max(1e-8, std::abs(analytic[i]) + std::abs(numeric[i]));
        max_err = std::max(max_err, std::abs(analytic[i] - numeric[i]) / denom);
    }
    return max_err;
}

// ---------------------------------------------------------------------------
// Unified handle

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::KNN: return "knn";
        case ModelKind::NB: return "nb";
        case ModelKind::TREE: return "tree";
        case ModelKind::MLP: return "mlp";
    }
    throw DomainError("unknown model kind");
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "knn") return ModelKind::KNN;
    if (name == "nb") return ModelKind::NB;
    if (name == "tree") return ModelKind::TREE;
    if (name == "mlp") return ModelKind::MLP;
    throw DomainError("unknown model kind: " + name);
}

ProbArray predict_proba(const Model& model, const FeatureVector& features) {
    const Sample x = model.scaler.apply(features.as_array());
    return std::visit(
        [&x](const auto& impl) -> ProbArray {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, KnnModel>) {
                return knn_predict_proba(impl, x);
            } else if constexpr (std::is_same_v<T, NbModel>) {
                return nb_predict_proba(impl, x);
            } else if constexpr (std::is_same_v<T, TreeModel>) {
                return tree_predict_proba(impl, x);
            } else {
                return mlp_predict_proba(impl, x);
            }
        },
        model.impl);
}

int predict(const Model& model, const FeatureVector& features) {
    return predict_from_proba(predict_proba(model, features));
}

// ---------------------------------------------------------------------------
// Grid search

namespace {

template <typename Predict>
double grid_accuracy(const MlDataset& val, Predict&& predict_one) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < val.size(); ++i) {
        if (predict_one(val.x[i]) == val.y[i]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(val.size());
}

}  // namespace

int tune_knn_k(const MlDataset& train, const MlDataset& val, const std::vector<int>& ks) {
    if (ks.empty()) throw ConfigError("knn grid is empty");
    int best_k = ks.front();
    double best_acc = -1.0;
    for (int k : ks) {
        const KnnModel m = knn_fit(train, k);
        const double acc = grid_accuracy(val, [&m](const Sample& x) {
            return predict_from_proba(knn_predict_proba(m, x));
        });
        if (acc > best_acc) {
            best_acc = acc;
            best_k = k;
        }
    }
    return best_k;
}

int tune_tree_depth(const MlDataset& train, const MlDataset& val,
                    const std::vector<int>& depths, int min_leaf) {
    if (depths.empty()) throw ConfigError("tree depth grid is empty");
    int best_depth = depths.front();
    double best_acc = -1.0;
    for (int depth : depths) {
        const TreeModel m = tree_fit(train, depth, min_leaf);
        const double acc = grid_accuracy(val, [&m](const Sample& x) {
            return predict_from_proba(tree_predict_proba(m, x));
        });
        if (acc > best_acc) {
            best_acc = acc;
            best_depth = depth;
        }
    }
    return best_depth;
}

double tune_mlp_lr(const MlDataset& train, const MlDataset& val,
                   const std::vector<double>& lrs, const MlpTrainConfig& base) {
    if (lrs.empty()) throw ConfigError("mlp lr grid is empty");
    double best_lr = lrs.front();
    double best_acc = -1.0;
    for (double lr : lrs) {
        MlpTrainConfig cfg = base;
        cfg.lr = lr;
        const MlpModel m = mlp_fit(train, val, cfg);
        const double acc = grid_accuracy(val, [&m](const Sample& x) {
            return predict_from_proba(mlp_predict_proba(m, x));
        });
        if (acc > best_acc) {
            best_acc = acc;
            best_lr = lr;
        }
    }
    return best_lr;
}

}  // namespace wavesel
