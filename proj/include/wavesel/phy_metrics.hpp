#pragma once

#include <vector>

#include "wavesel/core_model.hpp"
#include "wavesel/scenario.hpp"

namespace wavesel {

/// Frequency-domain layout for one (scenario, class) pair: which numerologies
/// are active, which block each user lands in, and how the bandwidth is
/// split. Blocks are laid out contiguously in ascending-mu order with the
/// class guard at each internal boundary.
struct AllocationPlan {
    std::vector<int> active_mus;       ///< distinct, ascending, length = num_count
    std::vector<int> user_mu;          ///< per user, an element of active_mus
    std::vector<double> block_bw_hz;   ///< aligned with active_mus
    double guard_hz = 0.0;             ///< width of each internal guard
    double total_bw_hz = 0.0;
};

/// The three performance metrics for one (scenario, class) pair.
struct MetricTriple {
    double sinr_db = 0.0;      ///< mean per-user SINR in dB
    double se_bps_hz = 0.0;    ///< cell spectral efficiency
    double flexibility = 0.0;  ///< num_count / 4
};

struct MetricConfig {
    double total_bw_hz = 20e6;
    double snr_db = 20.0;
};

/// Fraction of received power arriving after the CP, under an exponential
/// power-delay profile with rms sigma = tau_max/4 truncated at tau_max.
/// Zero when the whole profile fits inside the CP.
double isi_fraction(double tau_max_s, int mu);

/// Inter-carrier interference power fraction for a Doppler-spread carrier:
/// min(1, (pi * f_D * t_sym)^2 / 6), the small-offset ICI approximation.
double ici_fraction(double doppler_hz, int mu);

/// Sidelobe leakage from an adjacent block of a different numerology into a
/// victim subcarrier at the block edge. Integrates the aggressor's 1/f^2
/// sidelobe tail over the victim band beyond the effective guard distance
/// g_eff = guard + scs(victim)/2 (the half-spacing term keeps the integral
/// finite at zero guard):
///
///   edge_weight * (1 / (pi^2 * t_sym(aggressor))) * (1/g_eff - 1/(g_eff + W))
///
/// capped at 1. Returns 0 when victim and aggressor share a numerology.
double ini_fraction(const GuardOption& guard, int victim_mu, int aggressor_mu,
                    double aggressor_bw_hz, double edge_weight);

/// Numerology a user would pick in isolation: the one maximizing the
/// ISI+ICI-only SINR, i.e. minimizing isi+ici. Ties go to the lower index.
int preferred_mu(const UserScenario& user);

/// Deterministic allocation: per-user preferred numerologies, the
/// num_count most-demanded kept (ties to lower mu), users reassigned to the
/// nearest kept numerology, bandwidth split proportionally to user counts.
AllocationPlan plan_allocation(const CellScenario& scenario, const WaveformClass& klass,
                               double total_bw_hz);

/// SINR / spectral-efficiency / flexibility for one (scenario, class) pair.
MetricTriple cell_metrics(const CellScenario& scenario, const WaveformClass& klass,
                          const MetricConfig& config);

}  // namespace wavesel
