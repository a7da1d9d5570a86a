#pragma once

#include <filesystem>

#include "json.hpp"
#include "sentinel/grid_model.hpp"

namespace sentinel {

// Network fixture JSON:
//   { "buses":    [{"id", "lat", "lon", "injection_mw"}],
//     "branches": [{"id", "from", "to", "reactance_pu", "monitored"}],
//     "slack_bus": id, "mva_base": MVA }
// Optional extras: branch "in_service" (default true), branch
// "voltage_class" (free text), top-level "name".

NetworkModel network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const NetworkModel& net);

NetworkModel load_network(const std::filesystem::path& path);
void save_network(const NetworkModel& net, const std::filesystem::path& path);

}  // namespace sentinel
