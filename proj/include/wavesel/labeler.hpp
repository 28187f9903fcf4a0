#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "wavesel/core_model.hpp"
#include "wavesel/features.hpp"
#include "wavesel/phy_metrics.hpp"
#include "wavesel/scenario.hpp"

namespace wavesel {

/// Relative priorities of the three performance metrics. Must sum to 1.
struct MetricWeights {
    double w_sinr = 0.0;
    double w_se = 0.0;
    double w_flex = 0.0;

    void validate() const;
};

/// Weight rows per service-majority regime. eMBB majorities prioritize
/// spectral efficiency, uRLLC majorities SINR, mMTC leans to flexibility,
/// and mixed cells weight flexibility highest.
struct WeightTable {
    MetricWeights embb{0.2, 0.6, 0.2};
    MetricWeights urllc{0.6, 0.2, 0.2};
    MetricWeights mmtc{0.3, 0.3, 0.4};
    MetricWeights mixed{0.25, 0.25, 0.5};

    void validate() const;
};

struct ServiceCounts {
    int embb = 0;
    int urllc = 0;
    int mmtc = 0;

    int total() const { return embb + urllc + mmtc; }
    static ServiceCounts of(const CellScenario& scenario);
};

/// Weight row for a cell: the service with a strict majority (> U/2) picks
/// its row, otherwise the mixed row applies.
MetricWeights weights_for(const ServiceCounts& counts, const WeightTable& table);

/// Min-max normalizes each metric dimension across the candidates (a
/// constant dimension maps to 0.5 everywhere) and combines with the
/// weights. Outputs lie in [0,1].
std::array<double, kNumClasses> score_classes(
    const std::array<MetricTriple, kNumClasses>& metrics, const MetricWeights& weights);

/// A labeled scenario with its audit trail: the per-class metric triples
/// and final scores the label was derived from.
struct LabeledScenario {
    std::int64_t scenario_id = 0;
    FeatureVector features;
    int label = 0;
    std::array<MetricTriple, kNumClasses> score_table{};
    std::array<double, kNumClasses> scores{};
    std::array<bool, kNumClasses> feasible{};
};

struct LabelerConfig {
    ClassTable classes = class_table();
    WeightTable weights;
    MetricConfig metric;
};

/// Scores every class in the table against the scenario and returns the
/// argmax label, ties to the lowest label. Infeasible classes score -inf;
/// all-infeasible scenarios raise InfeasiblePlanError.
LabeledScenario label_scenario(const CellScenario& scenario, const LabelerConfig& config);

/// Downsamples every class uniformly at random to the minimum class count.
/// Output sorted by (label, scenario_id). A class with no rows raises
/// BalanceError naming it.
std::vector<LabeledScenario> balance_dataset(const std::vector<LabeledScenario>& rows,
                                             std::uint64_t seed);

}  // namespace wavesel
