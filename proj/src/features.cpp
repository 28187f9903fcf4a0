#include "wavesel/features.hpp"

#include <algorithm>
#include <cmath>

#include "wavesel/errors.hpp"
#include "wavesel/text_io.hpp"

namespace wavesel {

const std::array<std::string, kNumFeatures>& feature_names() {
    static const std::array<std::string, kNumFeatures> names = {
        "mean_tau_s",     "max_tau_s",  "mean_doppler_hz", "max_doppler_hz",
        "frac_embb",      "frac_urllc", "frac_mmtc"};
    return names;
}

FeatureVector extract(const CellScenario& scenario) {
    if (scenario.users.empty()) {
        throw DomainError("cannot extract features from an empty scenario");
    }
    FeatureVector f;
    double count_embb = 0;
    double count_urllc = 0;
    double count_mmtc = 0;
    for (const UserScenario& u : scenario.users) {
        f.mean_tau_s += u.tau_max_s;
        f.max_tau_s = std::max(f.max_tau_s, u.tau_max_s);
        f.mean_doppler_hz += u.doppler_hz;
        f.max_doppler_hz = std::max(f.max_doppler_hz, u.doppler_hz);
        switch (u.service) {
            case ServiceType::eMBB: count_embb += 1; break;
            case ServiceType::uRLLC: count_urllc += 1; break;
            case ServiceType::mMTC: count_mmtc += 1; break;
        }
    }
    const double n = static_cast<double>(scenario.users.size());
    f.mean_tau_s /= n;
    f.mean_doppler_hz /= n;
    f.frac_embb = count_embb / n;
    f.frac_urllc = count_urllc / n;
    f.frac_mmtc = count_mmtc / n;
    return f;
}

std::array<double, kNumFeatures> Scaler::apply(
    const std::array<double, kNumFeatures>& x) const {
    std::array<double, kNumFeatures> z{};
    for (int i = 0; i < kNumFeatures; ++i) {
        z[static_cast<std::size_t>(i)] =
            constant[static_cast<std::size_t>(i)]
                ? x[static_cast<std::size_t>(i)]
                : (x[static_cast<std::size_t>(i)] - mean[static_cast<std::size_t>(i)]) /
                      std_dev[static_cast<std::size_t>(i)];
    }
    return z;
}

std::array<double, kNumFeatures> Scaler::unapply(
    const std::array<double, kNumFeatures>& z) const {
    std::array<double, kNumFeatures> x{};
    for (int i = 0; i < kNumFeatures; ++i) {
        x[static_cast<std::size_t>(i)] =
            constant[static_cast<std::size_t>(i)]
                ? z[static_cast<std::size_t>(i)]
                : z[static_cast<std::size_t>(i)] * std_dev[static_cast<std::size_t>(i)] +
                      mean[static_cast<std::size_t>(i)];
    }
    return x;
}

Scaler fit_scaler(const std::vector<FeatureVector>& rows) {
    if (rows.size() < 2) {
        throw FitError("scaler fit needs at least 2 rows");
    }
    Scaler s;
    const double n = static_cast<double>(rows.size());
    for (const FeatureVector& row : rows) {
        const auto x = row.as_array();
        for (int i = 0; i < kNumFeatures; ++i) {
            s.mean[static_cast<std::size_t>(i)] += x[static_cast<std::size_t>(i)];
        }
    }
    for (int i = 0; i < kNumFeatures; ++i) {
        s.mean[static_cast<std::size_t>(i)] /= n;
    }
    std::array<double, kNumFeatures> ss{};
    for (const FeatureVector& row : rows) {
        const auto x = row.as_array();
        for (int i = 0; i < kNumFeatures; ++i) {
            const double d = x[static_cast<std::size_t>(i)] - s.mean[static_cast<std::size_t>(i)];
            ss[static_cast<std::size_t>(i)] += d * d;
        }
    }
    for (int i = 0; i < kNumFeatures; ++i) {
        const double var = ss[static_cast<std::size_t>(i)] / (n - 1.0);
        const double sd = std::sqrt(var);
        if (sd > 0.0) {
            s.std_dev[static_cast<std::size_t>(i)] = sd;
            s.constant[static_cast<std::size_t>(i)] = false;
        } else {
            s.std_dev[static_cast<std::size_t>(i)] = 0.0;
            s.constant[static_cast<std::size_t>(i)] = true;
        }
    }
    return s;
}

std::string scaler_to_text(const Scaler& scaler) {
    std::string out = "scaler v1\n";
    for (int i = 0; i < kNumFeatures; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        out += feature_names()[k] + " " + format_g17(scaler.mean[k]) + " " +
               format_g17(scaler.constant[k] ? 0.0 : scaler.std_dev[k]) + "\n";
    }
    return out;
}

Scaler scaler_from_text(const std::string& text) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || strip(lines[0]) != "scaler v1") {
        throw LoadError("scaler: bad or missing version line");
    }
    if (lines.size() < 1 + kNumFeatures) {
        throw LoadError("scaler: truncated file");
    }
    Scaler s;
    for (int i = 0; i < kNumFeatures; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const std::string& line = lines[1 + k];
        const std::size_t sp1 = line.find(' ');
        const std::size_t sp2 = line.find(' ', sp1 + 1);
        if (sp1 == std::string::npos || sp2 == std::string::npos) {
            throw LoadError("scaler: malformed line " + std::to_string(i + 2));
        }
        const std::string name = line.substr(0, sp1);
        if (name != feature_names()[k]) {
            throw LoadError("scaler: unexpected feature name '" + name + "'");
        }
        s.mean[k] = parse_double(line.substr(sp1 + 1, sp2 - sp1 - 1), "scaler");
        s.std_dev[k] = parse_double(line.substr(sp2 + 1), "scaler");
        s.constant[k] = s.std_dev[k] == 0.0;
    }
    return s;
}

void save_scaler(const Scaler& scaler, const std::string& path) {
    atomic_write_file(path, scaler_to_text(scaler));
}

Scaler load_scaler(const std::string& path) {
    return scaler_from_text(read_file(path));
}

}  // namespace wavesel
