#include "wavesel/scenario.hpp"

#include <sstream>

#include "wavesel/errors.hpp"
#include "wavesel/rng.hpp"
#include "wavesel/text_io.hpp"

namespace wavesel {

ServiceType service_from_int(int v) {
    if (v < 0 || v > 2) {
        throw DomainError("service code out of range: " + std::to_string(v));
    }
    return static_cast<ServiceType>(v);
}

void ScenarioConfig::validate() const {
    if (num_scenarios < 1) {
        throw ConfigError("num_scenarios must be >= 1");
    }
    if (users_per_cell < 1) {
        throw ConfigError("users_per_cell must be >= 1");
    }
    if (!(tau_min_s > 0.0) || !(tau_min_s < tau_max_s)) {
        throw ConfigError("tau range must satisfy 0 < min < max");
    }
    if (!(doppler_min_hz > 0.0) || !(doppler_min_hz < doppler_max_hz)) {
        throw ConfigError("doppler range must satisfy 0 < min < max");
    }
}

CellScenario generate_scenario(const ScenarioConfig& config, std::int64_t index) {
    Rng rng(substream_seed(config.master_seed, static_cast<std::uint64_t>(index)));
    CellScenario scenario;
    scenario.scenario_id = index;
    scenario.users.resize(static_cast<std::size_t>(config.users_per_cell));
    for (UserScenario& user : scenario.users) {
        user.tau_max_s = rng.uniform(config.tau_min_s, config.tau_max_s);
        user.doppler_hz = rng.uniform(config.doppler_min_hz, config.doppler_max_hz);
        user.service = static_cast<ServiceType>(rng.uniform_int(3));
    }
    return scenario;
}

std::vector<CellScenario> generate_scenarios(const ScenarioConfig& config) {
    config.validate();
    std::vector<CellScenario> scenarios;
    scenarios.reserve(static_cast<std::size_t>(config.num_scenarios));
    for (std::int64_t i = 0; i < config.num_scenarios; ++i) {
        scenarios.push_back(generate_scenario(config, i));
    }
    return scenarios;
}

std::string raw_csv_header(int users_per_cell) {
    std::string header = "scenario_id";
    for (int u = 0; u < users_per_cell; ++u) {
        const std::string p = "u" + std::to_string(u);
        header += "," + p + "_tau_s," + p + "_doppler_hz," + p + "_service";
    }
    return header;
}

void write_raw_csv(const std::vector<CellScenario>& scenarios, const std::string& path) {
    if (scenarios.empty()) {
        throw DomainError("cannot write an empty scenario list");
    }
    const int users = static_cast<int>(scenarios.front().users.size());
    std::string out = raw_csv_header(users) + "\n";
    for (const CellScenario& s : scenarios) {
        if (static_cast<int>(s.users.size()) != users) {
            throw DomainError("scenarios have inconsistent user counts");
        }
        out += std::to_string(s.scenario_id);
        for (const UserScenario& u : s.users) {
            out += "," + format_g9(u.tau_max_s);
            out += "," + format_g9(u.doppler_hz);
            out += "," + std::to_string(static_cast<int>(u.service));
        }
        out += "\n";
    }
    atomic_write_file(path, out);
}

std::vector<CellScenario> read_raw_csv(const std::string& path) {
    const std::vector<std::string> lines = split_lines(read_file(path));
    if (lines.empty()) {
        throw ParseError(path + ": missing header");
    }
    const std::vector<std::string> header = split_csv(lines[0]);
    if (header.size() < 4 || strip(header[0]) != "scenario_id" ||
        (header.size() - 1) % 3 != 0) {
        throw ParseError(path + ": malformed raw-scenario header");
    }
    const int users = static_cast<int>((header.size() - 1) / 3);
    if (lines[0] != raw_csv_header(users)) {
        throw ParseError(path + ": malformed raw-scenario header");
    }

    std::vector<CellScenario> scenarios;
    scenarios.reserve(lines.size() - 1);
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (strip(lines[li]).empty()) continue;
        const std::string ctx = path + ":" + std::to_string(li + 1);
        const std::vector<std::string> fields = split_csv(lines[li]);
        if (fields.size() != header.size()) {
            throw ParseError(ctx + ": expected " + std::to_string(header.size()) +
                             " columns, got " + std::to_string(fields.size()));
        }
        CellScenario s;
        s.scenario_id = parse_int(fields[0], ctx);
        s.users.resize(static_cast<std::size_t>(users));
        for (int u = 0; u < users; ++u) {
            UserScenario& user = s.users[static_cast<std::size_t>(u)];
            user.tau_max_s = parse_double(fields[static_cast<std::size_t>(1 + 3 * u)], ctx);
            user.doppler_hz = parse_double(fields[static_cast<std::size_t>(2 + 3 * u)], ctx);
            const std::int64_t code = parse_int(fields[static_cast<std::size_t>(3 + 3 * u)], ctx);
            if (code < 0 || code > 2) {
                throw ParseError(ctx + ": service code out of range");
            }
            user.service = static_cast<ServiceType>(code);
        }
        scenarios.push_back(std::move(s));
    }
    if (scenarios.empty()) {
        throw ParseError(path + ": no data rows");
    }
    return scenarios;
}

}  // namespace wavesel
