#pragma once

#include <array>
#include <vector>

namespace wavesel {

inline constexpr int kNumNumerologies = 4;
inline constexpr int kNumClasses = 10;
inline constexpr double kScsBaseHz = 15000.0;

/// Normal cyclic prefix length as a fraction of the useful symbol duration.
/// The same ratio applies to every numerology index.
inline constexpr double kCpRatio = 144.0 / 2048.0;

/// 5G NR numerology: subcarrier spacing and the symbol/CP durations derived
/// from it.
struct NumerologyParams {
    int mu = 0;           ///< numerology index, 0..3
    double scs_hz = 0.0;  ///< subcarrier spacing, 15 kHz * 2^mu
    double t_sym_s = 0.0; ///< useful symbol duration, 1/scs
    double t_cp_s = 0.0;  ///< cyclic prefix duration
};

/// Derives the numerology parameter set for index mu in {0,1,2,3}.
/// Throws DomainError for any other index.
NumerologyParams numerology_params(int mu);

enum class GuardId { G1, G2, G3, NONE };

/// Guard band option between adjacent numerology blocks. The width is given
/// in units of 15 kHz subcarriers.
struct GuardOption {
    GuardId id = GuardId::NONE;
    int guard_sc15 = 0;

    double width_hz() const { return guard_sc15 * kScsBaseHz; }
};

/// Guard widths for the three guard options, in 15 kHz subcarrier units.
struct GuardWidths {
    int g1_sc15 = 0;
    int g2_sc15 = 4;
    int g3_sc15 = 8;
};

/// One of the ten waveform parameter sets the classifier predicts.
struct WaveformClass {
    int label = 0;      ///< 1..10
    int num_count = 0;  ///< simultaneously active numerologies, 1..4
    GuardOption guard;
};

/// The canonical ten-class lookup table. Labels 1-3 use four numerologies
/// with guards G1..G3, 4-6 three, 7-9 two, and label 10 a single numerology
/// with no guard. Within each block the label ascends with guard width.
struct ClassTable {
    std::array<WaveformClass, kNumClasses> entries;

    const WaveformClass& by_label(int label) const;
};

ClassTable class_table();
ClassTable class_table(const GuardWidths& widths);

/// Mapping from class label to a coarser group id, used for the relaxed
/// accuracy figure. Total over labels 1..10.
struct ClassGrouping {
    std::array<int, kNumClasses> group_by_label;  ///< index = label - 1
};

/// Default grouping: classes sharing a numerology count share a group.
/// {1,2,3}->1, {4,5,6}->2, {7,8,9}->3, {10}->4.
ClassGrouping default_grouping();

/// Group id for a label under the given grouping. Throws DomainError when
/// the label is outside 1..10.
int group_of(int label, const ClassGrouping& grouping);

}  // namespace wavesel
