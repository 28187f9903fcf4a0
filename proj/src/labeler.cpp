#include "wavesel/labeler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wavesel/errors.hpp"
#include "wavesel/rng.hpp"

namespace wavesel {

void MetricWeights::validate() const {
    if (w_sinr < 0.0 || w_se < 0.0 || w_flex < 0.0) {
        throw ConfigError("metric weights must be non-negative");
    }
    if (std::abs(w_sinr + w_se + w_flex - 1.0) > 1e-12) {
        throw ConfigError("metric weights must sum to 1");
    }
}

void WeightTable::validate() const {
    embb.validate();
    urllc.validate();
    mmtc.validate();
    mixed.validate();
}

ServiceCounts ServiceCounts::of(const CellScenario& scenario) {
    ServiceCounts c;
    for (const UserScenario& u : scenario.users) {
        switch (u.service) {
            case ServiceType::eMBB: ++c.embb; break;
            case ServiceType::uRLLC: ++c.urllc; break;
            case ServiceType::mMTC: ++c.mmtc; break;
        }
    }
    return c;
}

MetricWeights weights_for(const ServiceCounts& counts, const WeightTable& table) {
    const int total = counts.total();
    if (total <= 0) {
        throw DomainError("weights_for: no users");
    }
    if (2 * counts.embb > total) return table.embb;
    if (2 * counts.urllc > total) return table.urllc;
    if (2 * counts.mmtc > total) return table.mmtc;
    return table.mixed;
}

namespace {

/// Min-max normalization over the candidates marked present. Constant
/// dimensions map to 0.5.
std::array<double, kNumClasses> normalize_dimension(
    const std::array<double, kNumClasses>& values, const std::array<bool, kNumClasses>& present) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < kNumClasses; ++c) {
        if (!present[static_cast<std::size_t>(c)]) continue;
        lo = std::min(lo, values[static_cast<std::size_t>(c)]);
        hi = std::max(hi, values[static_cast<std::size_t>(c)]);
    }
    std::array<double, kNumClasses> out{};
    for (int c = 0; c < kNumClasses; ++c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        if (!present[cc]) continue;
        out[cc] = hi == lo ? 0.5 : (values[cc] - lo) / (hi - lo);
    }
    return out;
}

std::array<double, kNumClasses> score_candidates(
    const std::array<MetricTriple, kNumClasses>& metrics,
    const std::array<bool, kNumClasses>& present, const MetricWeights& weights) {
    weights.validate();
    std::array<double, kNumClasses> sinr{};
    std::array<double, kNumClasses> se{};
    std::array<double, kNumClasses> flex{};
    for (int c = 0; c < kNumClasses; ++c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        sinr[cc] = metrics[cc].sinr_db;
        se[cc] = metrics[cc].se_bps_hz;
        flex[cc] = metrics[cc].flexibility;
    }
    const auto n_sinr = normalize_dimension(sinr, present);
    const auto n_se = normalize_dimension(se, present);
    const auto n_flex = normalize_dimension(flex, present);

    std::array<double, kNumClasses> scores{};
    for (int c = 0; c < kNumClasses; ++c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        scores[cc] = present[cc] ? weights.w_sinr * n_sinr[cc] + weights.w_se * n_se[cc] +
                                       weights.w_flex * n_flex[cc]
                                 : -std::numeric_limits<double>::infinity();
    }
    return scores;
}

}  // namespace

std::array<double, kNumClasses> score_classes(
    const std::array<MetricTriple, kNumClasses>& metrics, const MetricWeights& weights) {
    std::array<bool, kNumClasses> present;
    present.fill(true);
    return score_candidates(metrics, present, weights);
}

LabeledScenario label_scenario(const CellScenario& scenario, const LabelerConfig& config) {
    LabeledScenario out;
    out.scenario_id = scenario.scenario_id;
    out.features = extract(scenario);

    bool any_feasible = false;
    for (int c = 0; c < kNumClasses; ++c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        try {
            out.score_table[cc] =
                cell_metrics(scenario, config.classes.entries[cc], config.metric);
            out.feasible[cc] = true;
            any_feasible = true;
        } catch (const InfeasiblePlanError&) {
            out.feasible[cc] = false;
        }
    }
    if (!any_feasible) {
        throw InfeasiblePlanError("scenario " + std::to_string(scenario.scenario_id) +
                                  ": every class is infeasible");
    }

    const MetricWeights weights = weights_for(ServiceCounts::of(scenario), config.weights);
    out.scores = score_candidates(out.score_table, out.feasible, weights);

    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (out.scores[static_cast<std::size_t>(c)] > out.scores[static_cast<std::size_t>(best)]) {
            best = c;
        }
    }
    out.label = best + 1;
    return out;
}

std::vector<LabeledScenario> balance_dataset(const std::vector<LabeledScenario>& rows,
                                             std::uint64_t seed) {
    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const int label = rows[i].label;
        if (label < 1 || label > kNumClasses) {
            throw DomainError("balance: label out of range");
        }
        by_class[static_cast<std::size_t>(label - 1)].push_back(i);
    }

    std::size_t min_count = std::numeric_limits<std::size_t>::max();
    for (int c = 0; c < kNumClasses; ++c) {
        const std::size_t n = by_class[static_cast<std::size_t>(c)].size();
        if (n == 0) {
            throw BalanceError("class " + std::to_string(c + 1) + " has no samples");
        }
        min_count = std::min(min_count, n);
    }

    std::vector<LabeledScenario> kept;
    kept.reserve(min_count * kNumClasses);
    for (int c = 0; c < kNumClasses; ++c) {
        std::vector<std::size_t>& idx = by_class[static_cast<std::size_t>(c)];
        Rng rng(substream_seed(seed, static_cast<std::uint64_t>(c + 1)));
        for (std::size_t i = idx.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.uniform_int(i));
            std::swap(idx[i - 1], idx[j]);
        }
        for (std::size_t i = 0; i < min_count; ++i) {
            kept.push_back(rows[idx[i]]);
        }
    }
    std::sort(kept.begin(), kept.end(), [](const LabeledScenario& a, const LabeledScenario& b) {
        return a.label != b.label ? a.label < b.label : a.scenario_id < b.scenario_id;
    });
    return kept;
}

}  // namespace wavesel
