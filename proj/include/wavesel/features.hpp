#pragma once

#include <array>
#include <string>
#include <vector>

#include "wavesel/scenario.hpp"

namespace wavesel {

inline constexpr int kNumFeatures = 7;

/// The seven user-count-independent scenario features: delay and Doppler
/// statistics plus the service-type mix.
struct FeatureVector {
    double mean_tau_s = 0.0;
    double max_tau_s = 0.0;
    double mean_doppler_hz = 0.0;
    double max_doppler_hz = 0.0;
    double frac_embb = 0.0;
    double frac_urllc = 0.0;
    double frac_mmtc = 0.0;

    std::array<double, kNumFeatures> as_array() const {
        return {mean_tau_s,  max_tau_s,  mean_doppler_hz, max_doppler_hz,
                frac_embb,   frac_urllc, frac_mmtc};
    }
    static FeatureVector from_array(const std::array<double, kNumFeatures>& a) {
        return FeatureVector{a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
    }
};

/// Canonical feature names, used in the scaler text format.
const std::array<std::string, kNumFeatures>& feature_names();

/// Aggregates a cell scenario into its feature vector. Symmetric in the
/// users, so any permutation of the same users gives the same vector.
FeatureVector extract(const CellScenario& scenario);

/// Per-feature standardization fitted on training data. A feature whose
/// training column is constant is flagged and passed through unscaled.
struct Scaler {
    std::array<double, kNumFeatures> mean{};
    std::array<double, kNumFeatures> std_dev{};
    std::array<bool, kNumFeatures> constant{};

    std::array<double, kNumFeatures> apply(const std::array<double, kNumFeatures>& x) const;
    std::array<double, kNumFeatures> unapply(const std::array<double, kNumFeatures>& z) const;
};

/// Fits mean and sample standard deviation per feature. Requires at least
/// two rows.
Scaler fit_scaler(const std::vector<FeatureVector>& rows);

/// Text persistence: line `scaler v1`, then one `name mean std` line per
/// feature (std 0 marks a constant column).
std::string scaler_to_text(const Scaler& scaler);
Scaler scaler_from_text(const std::string& text);
void save_scaler(const Scaler& scaler, const std::string& path);
Scaler load_scaler(const std::string& path);

}  // namespace wavesel
