#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wavesel {

enum class ServiceType : int { eMBB = 0, uRLLC = 1, mMTC = 2 };

ServiceType service_from_int(int v);

/// Channel and service summary for one user: maximum excess delay, maximum
/// Doppler shift, and the 5G service type.
struct UserScenario {
    double tau_max_s = 0.0;
    double doppler_hz = 0.0;
    ServiceType service = ServiceType::eMBB;
};

/// One random cell realization: U users plus its index in the run.
struct CellScenario {
    std::int64_t scenario_id = 0;
    std::vector<UserScenario> users;
};

/// Generation parameters. Defaults span channel conditions under which every
/// numerology wins for some users: delays from well inside every CP up to
/// past the 15 kHz CP, and Doppler from pedestrian to high-speed.
struct ScenarioConfig {
    std::int64_t num_scenarios = 20000;
    int users_per_cell = 20;
    double tau_min_s = 1e-7;
    double tau_max_s = 6e-6;
    double doppler_min_hz = 5.0;
    double doppler_max_hz = 2000.0;
    double snr_db = 20.0;
    std::uint64_t master_seed = 1;

    void validate() const;  ///< throws ConfigError on bad ranges
};

/// Scenario i as a pure function of (master_seed, i). Draw order per user is
/// tau, doppler, service, users in index order, on the substream
/// substream_seed(master_seed, i).
CellScenario generate_scenario(const ScenarioConfig& config, std::int64_t index);

/// All S scenarios in index order. Equal configs give equal lists.
std::vector<CellScenario> generate_scenarios(const ScenarioConfig& config);

/// Raw-scenario CSV: one row per scenario,
/// `scenario_id,u0_tau_s,u0_doppler_hz,u0_service,...`. Header mandatory,
/// floats at 9 significant digits, service encoded 0/1/2.
std::string raw_csv_header(int users_per_cell);
void write_raw_csv(const std::vector<CellScenario>& scenarios, const std::string& path);
std::vector<CellScenario> read_raw_csv(const std::string& path);

}  // namespace wavesel
