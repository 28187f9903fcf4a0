#include "wavesel/core_model.hpp"

#include <string>

#include "wavesel/errors.hpp"

namespace wavesel {

NumerologyParams numerology_params(int mu) {
    if (mu < 0 || mu >= kNumNumerologies) {
        throw DomainError("numerology index out of range: " + std::to_string(mu));
    }
    NumerologyParams p;
    p.mu = mu;
    p.scs_hz = kScsBaseHz * static_cast<double>(1 << mu);
    p.t_sym_s = 1.0 / p.scs_hz;
    p.t_cp_s = kCpRatio * p.t_sym_s;
    return p;
}

const WaveformClass& ClassTable::by_label(int label) const {
    if (label < 1 || label > kNumClasses) {
        throw DomainError("class label out of range: " + std::to_string(label));
    }
    return entries[static_cast<std::size_t>(label - 1)];
}

ClassTable class_table(const GuardWidths& widths) {
    const std::array<GuardOption, 3> guards = {
        GuardOption{GuardId::G1, widths.g1_sc15},
        GuardOption{GuardId::G2, widths.g2_sc15},
        GuardOption{GuardId::G3, widths.g3_sc15},
    };
    ClassTable table;
    int label = 1;
    for (int num_count = kNumNumerologies; num_count >= 2; --num_count) {
        for (const GuardOption& g : guards) {
            table.entries[static_cast<std::size_t>(label - 1)] =
                WaveformClass{label, num_count, g};
            ++label;
        }
    }
    // A single numerology has no internal boundary, so no guard either.
    table.entries[kNumClasses - 1] =
        WaveformClass{kNumClasses, 1, GuardOption{GuardId::NONE, 0}};
    return table;
}

ClassTable class_table() { return class_table(GuardWidths{}); }

ClassGrouping default_grouping() {
    ClassGrouping g;
    for (int label = 1; label <= kNumClasses; ++label) {
        int group = 0;
        if (label <= 3) {
            group = 1;
        } else if (label <= 6) {
            group = 2;
        } else if (label <= 9) {
            group = 3;
        } else {
            group = 4;
        }
        g.group_by_label[static_cast<std::size_t>(label - 1)] = group;
    }
    return g;
}

int group_of(int label, const ClassGrouping& grouping) {
    if (label < 1 || label > kNumClasses) {
        throw DomainError("unknown class label: " + std::to_string(label));
    }
    return grouping.group_by_label[static_cast<std::size_t>(label - 1)];
}

}  // namespace wavesel
