#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wavesel/core_model.hpp"
#include "wavesel/ml.hpp"

namespace wavesel {

/// 10x10 count matrix; rows index the true label, columns the predicted one.
struct ConfusionMatrix {
    std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> counts{};

    std::int64_t total() const;
    std::int64_t trace() const;
};

ConfusionMatrix confusion(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted_labels);

/// trace / total. Throws DomainError on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

/// Accuracy after mapping both label sequences through the grouping.
/// Never below the fine accuracy: grouping can only merge labels.
double grouped_accuracy(const std::vector<int>& true_labels,
                        const std::vector<int>& predicted_labels,
                        const ClassGrouping& grouping);

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::array<std::vector<RocPoint>, kNumClasses> points;
    std::array<double, kNumClasses> auc{};
    std::array<bool, kNumClasses> class_in_truth{};
    double macro_auc = 0.0;
    bool has_absent_class = false;  ///< some class missing from the truth
};

/// Binary ROC for one positive class. Thresholds sweep the distinct scores
/// plus sentinels 0 and 1 (predict positive when score >= threshold); the
/// empty-prediction endpoint (0,0) is always included. AUC by trapezoid.
std::pair<std::vector<RocPoint>, double> roc_binary(const std::vector<bool>& positive,
                                                    const std::vector<double>& scores);

/// One-vs-rest ROC per class over a probability matrix (rows sum to 1).
/// Classes absent from the truth get no AUC and are excluded from the
/// macro average, with has_absent_class set.
RocCurve roc_ovr(const std::vector<int>& true_labels,
                 const std::vector<ProbArray>& scores);

/// Confusion matrix CSV: header `pred_1..pred_10`, then one row of counts
/// per true label in ascending label order.
std::string confusion_to_csv(const ConfusionMatrix& cm);

/// ROC CSV: `class,threshold,fpr,tpr` for every class and curve point.
std::string roc_to_csv(const RocCurve& roc);

}  // namespace wavesel
