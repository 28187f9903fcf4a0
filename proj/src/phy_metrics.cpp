#include "wavesel/phy_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wavesel/errors.hpp"

namespace wavesel {

namespace {

constexpr double kPi = std::numbers::pi;

/// Subcarriers a block edge exposes to inter-numerology leakage; one
/// resource block's worth.
constexpr double kEdgeSubcarriers = 12.0;

}  // namespace

double isi_fraction(double tau_max_s, int mu) {
    if (!(tau_max_s > 0.0)) {
        throw DomainError("tau_max_s must be positive");
    }
    const NumerologyParams p = numerology_params(mu);
    if (tau_max_s <= p.t_cp_s) {
        return 0.0;
    }
    const double sigma = tau_max_s / 4.0;
    const double tail = std::exp(-p.t_cp_s / sigma) - std::exp(-tau_max_s / sigma);
    return tail / (1.0 - std::exp(-tau_max_s / sigma));
}

double ici_fraction(double doppler_hz, int mu) {
    if (doppler_hz < 0.0) {
        throw DomainError("doppler_hz must be non-negative");
    }
    const NumerologyParams p = numerology_params(mu);
    const double x = kPi * doppler_hz * p.t_sym_s;
    return std::min(1.0, x * x / 6.0);
}

double ini_fraction(const GuardOption& guard, int victim_mu, int aggressor_mu,
                    double aggressor_bw_hz, double edge_weight) {
    if (victim_mu == aggressor_mu) {
        return 0.0;
    }
    const NumerologyParams victim = numerology_params(victim_mu);
    const NumerologyParams aggressor = numerology_params(aggressor_mu);
    const double g_eff = guard.width_hz() + 0.5 * victim.scs_hz;
    const double leak = (1.0 / (kPi * kPi * aggressor.t_sym_s)) *
                        (1.0 / g_eff - 1.0 / (g_eff + aggressor_bw_hz));
    return std::min(1.0, edge_weight * leak);
}

int preferred_mu(const UserScenario& user) {
    int best = 0;
    double best_cost = isi_fraction(user.tau_max_s, 0) + ici_fraction(user.doppler_hz, 0);
    for (int mu = 1; mu < kNumNumerologies; ++mu) {
        const double cost =
            isi_fraction(user.tau_max_s, mu) + ici_fraction(user.doppler_hz, mu);
        if (cost < best_cost) {
            best_cost = cost;
            best = mu;
        }
    }
    return best;
}

AllocationPlan plan_allocation(const CellScenario& scenario, const WaveformClass& klass,
                               double total_bw_hz) {
    if (scenario.users.empty()) {
        throw DomainError("scenario has no users");
    }
    const int num_users = static_cast<int>(scenario.users.size());

    const double guard_hz = klass.guard.width_hz();
    const double guards_total = guard_hz * static_cast<double>(klass.num_count - 1);
    if (guards_total >= total_bw_hz) {
        throw InfeasiblePlanError("guards exhaust the bandwidth for class " +
                                  std::to_string(klass.label));
    }

    std::vector<int> preferred(static_cast<std::size_t>(num_users));
    std::array<int, kNumNumerologies> demand{};
    for (int u = 0; u < num_users; ++u) {
        const int mu = preferred_mu(scenario.users[static_cast<std::size_t>(u)]);
        preferred[static_cast<std::size_t>(u)] = mu;
        ++demand[static_cast<std::size_t>(mu)];
    }

    // Keep the num_count most-demanded numerologies, ties to lower mu.
    std::array<int, kNumNumerologies> order = {0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&demand](int a, int b) {
        return demand[static_cast<std::size_t>(a)] > demand[static_cast<std::size_t>(b)];
    });
    std::vector<int> selected(order.begin(), order.begin() + klass.num_count);
    std::sort(selected.begin(), selected.end());

    AllocationPlan plan;
    plan.active_mus = selected;
    plan.guard_hz = guard_hz;
    plan.total_bw_hz = total_bw_hz;
    plan.user_mu.resize(static_cast<std::size_t>(num_users));

    std::vector<int> block_users(selected.size(), 0);
    for (int u = 0; u < num_users; ++u) {
        const int pref = preferred[static_cast<std::size_t>(u)];
        int best_idx = 0;
        int best_dist = std::abs(selected[0] - pref);
        for (std::size_t i = 1; i < selected.size(); ++i) {
            const int dist = std::abs(selected[i] - pref);
            if (dist < best_dist) {
                best_dist = dist;
                best_idx = static_cast<int>(i);
            }
        }
        plan.user_mu[static_cast<std::size_t>(u)] = selected[static_cast<std::size_t>(best_idx)];
        ++block_users[static_cast<std::size_t>(best_idx)];
    }

    const double usable = total_bw_hz - guards_total;
    plan.block_bw_hz.resize(selected.size());
    for (std::size_t i = 0; i < selected.size(); ++i) {
        plan.block_bw_hz[i] =
            usable * static_cast<double>(block_users[i]) / static_cast<double>(num_users);
    }
    return plan;
}

MetricTriple cell_metrics(const CellScenario& scenario, const WaveformClass& klass,
                          const MetricConfig& config) {
    const AllocationPlan plan = plan_allocation(scenario, klass, config.total_bw_hz);
    const double n0 = std::pow(10.0, -config.snr_db / 10.0);
    const double cp_efficiency = 1.0 / (1.0 + kCpRatio);

    double sum_sinr_db = 0.0;
    double sum_rate = 0.0;
    for (std::size_t u = 0; u < scenario.users.size(); ++u) {
        const UserScenario& user = scenario.users[u];
        const int mu = plan.user_mu[u];
        const std::size_t block =
            static_cast<std::size_t>(std::find(plan.active_mus.begin(), plan.active_mus.end(), mu) -
                                     plan.active_mus.begin());

        double interference =
            isi_fraction(user.tau_max_s, mu) + ici_fraction(user.doppler_hz, mu);

        const double block_bw = plan.block_bw_hz[block];
        const double n_sc = block_bw / numerology_params(mu).scs_hz;
        const double edge_weight = n_sc > kEdgeSubcarriers ? kEdgeSubcarriers / n_sc : 1.0;
        if (block > 0) {
            interference += ini_fraction(klass.guard, mu, plan.active_mus[block - 1],
                                         plan.block_bw_hz[block - 1], edge_weight);
        }
        if (block + 1 < plan.active_mus.size()) {
            interference += ini_fraction(klass.guard, mu, plan.active_mus[block + 1],
                                         plan.block_bw_hz[block + 1], edge_weight);
        }

        const double sinr = 1.0 / (n0 + interference);
        sum_sinr_db += 10.0 * std::log10(sinr);
        sum_rate += cp_efficiency * std::log2(1.0 + sinr);
    }

    const double num_users = static_cast<double>(scenario.users.size());
    const double guard_fraction =
        plan.guard_hz * static_cast<double>(klass.num_count - 1) / config.total_bw_hz;

    MetricTriple m;
    m.sinr_db = sum_sinr_db / num_users;
    m.se_bps_hz = (1.0 - guard_fraction) * (sum_rate / num_users);
    m.flexibility = static_cast<double>(klass.num_count) / 4.0;
    return m;
}

}  // namespace wavesel
