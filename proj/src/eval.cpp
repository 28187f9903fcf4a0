#include "wavesel/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "wavesel/errors.hpp"
#include "wavesel/text_io.hpp"

namespace wavesel {

namespace {

void check_label(int label) {
    if (label < 1 || label > kNumClasses) {
        throw DomainError("label out of range: " + std::to_string(label));
    }
}

}  // namespace

std::int64_t ConfusionMatrix::total() const {
    std::int64_t t = 0;
    for (const auto& row : counts) {
        for (std::int64_t c : row) {
            t += c;
        }
    }
    return t;
}

std::int64_t ConfusionMatrix::trace() const {
    std::int64_t t = 0;
    for (int i = 0; i < kNumClasses; ++i) {
        t += counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    return t;
}

ConfusionMatrix confusion(const std::vector<int>& true_labels,
                          const std::vector<int>& predicted_labels) {
    if (true_labels.size() != predicted_labels.size()) {
        throw DomainError("true/predicted label sequences differ in length");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        check_label(true_labels[i]);
        check_label(predicted_labels[i]);
        ++cm.counts[static_cast<std::size_t>(true_labels[i] - 1)]
                   [static_cast<std::size_t>(predicted_labels[i] - 1)];
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (total == 0) {
        throw DomainError("accuracy of an empty confusion matrix");
    }
    return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

double grouped_accuracy(const std::vector<int>& true_labels,
                        const std::vector<int>& predicted_labels,
                        const ClassGrouping& grouping) {
    if (true_labels.size() != predicted_labels.size()) {
        throw DomainError("true/predicted label sequences differ in length");
    }
    if (true_labels.empty()) {
        throw DomainError("grouped accuracy of empty input");
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < true_labels.size(); ++i) {
        if (group_of(true_labels[i], grouping) == group_of(predicted_labels[i], grouping)) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(true_labels.size());
}

std::pair<std::vector<RocPoint>, double> roc_binary(const std::vector<bool>& positive,
                                                    const std::vector<double>& scores) {
    if (positive.size() != scores.size() || positive.empty()) {
        throw DomainError("roc: label/score size mismatch or empty input");
    }
    double n_pos = 0.0;
    double n_neg = 0.0;
    for (bool p : positive) {
        (p ? n_pos : n_neg) += 1.0;
    }
    if (n_pos == 0.0 || n_neg == 0.0) {
        throw DomainError("roc: needs at least one positive and one negative");
    }

    std::set<double> threshold_set(scores.begin(), scores.end());
    threshold_set.insert(0.0);
    threshold_set.insert(1.0);

    std::vector<RocPoint> points;
    points.reserve(threshold_set.size() + 1);
    // Empty-prediction endpoint: a threshold above every score.
    points.push_back(RocPoint{std::numeric_limits<double>::infinity(), 0.0, 0.0});

    // Descending thresholds; positives and fpr/tpr grow monotonically.
    for (auto it = threshold_set.rbegin(); it != threshold_set.rend(); ++it) {
        const double t = *it;
        double tp = 0.0;
        double fp = 0.0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (scores[i] >= t) {
                (positive[i] ? tp : fp) += 1.0;
            }
        }
        points.push_back(RocPoint{t, fp / n_neg, tp / n_pos});
    }

    double auc = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        auc += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
    }
    return {std::move(points), auc};
}

RocCurve roc_ovr(const std::vector<int>& true_labels, const std::vector<ProbArray>& scores) {
    if (true_labels.size() != scores.size() || true_labels.empty()) {
        throw DomainError("roc_ovr: label/score size mismatch or empty input");
    }
    for (const ProbArray& row : scores) {
        double sum = 0.0;
        for (double v : row) sum += v;
        if (std::abs(sum - 1.0) > 1e-6) {
            throw DomainError("roc_ovr: score rows must sum to 1");
        }
    }

    RocCurve roc;
    double auc_sum = 0.0;
    int auc_count = 0;
    for (int c = 0; c < kNumClasses; ++c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        std::vector<bool> positive(true_labels.size());
        std::vector<double> class_scores(true_labels.size());
        bool any_positive = false;
        for (std::size_t i = 0; i < true_labels.size(); ++i) {
            check_label(true_labels[i]);
            positive[i] = true_labels[i] == c + 1;
            any_positive = any_positive || positive[i];
            class_scores[i] = scores[i][cc];
        }
        roc.class_in_truth[cc] = any_positive;
        if (!any_positive) {
            roc.has_absent_class = true;
            continue;
        }
        auto [points, auc] = roc_binary(positive, class_scores);
        roc.points[cc] = std::move(points);
        roc.auc[cc] = auc;
        auc_sum += auc;
        ++auc_count;
    }
    roc.macro_auc = auc_count > 0 ? auc_sum / auc_count : 0.0;
    return roc;
}

std::string confusion_to_csv(const ConfusionMatrix& cm) {
    std::string out;
    for (int c = 0; c < kNumClasses; ++c) {
        out += (c == 0 ? "pred_" : ",pred_") + std::to_string(c + 1);
    }
    out += "\n";
    for (int t = 0; t < kNumClasses; ++t) {
        for (int p = 0; p < kNumClasses; ++p) {
            if (p > 0) out += ",";
            out += std::to_string(cm.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]);
        }
        out += "\n";
    }
    return out;
}

std::string roc_to_csv(const RocCurve& roc) {
    std::string out = "class,threshold,fpr,tpr\n";
    for (int c = 0; c < kNumClasses; ++c) {
        for (const RocPoint& p : roc.points[static_cast<std::size_t>(c)]) {
            out += std::to_string(c + 1) + "," + format_g9(p.threshold) + "," +
                   format_g9(p.fpr) + "," + format_g9(p.tpr) + "\n";
        }
    }
    return out;
}

}  // namespace wavesel
