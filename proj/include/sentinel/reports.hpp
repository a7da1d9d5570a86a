#pragma once

#include <string_view>

#include "json.hpp"
#include "sentinel/grid_model.hpp"
#include "sentinel/outage_locator.hpp"

namespace sentinel {

std::string_view to_string(LocationMethod method);
LocationMethod location_method_from_string(std::string_view name);

/// {method, event_time_ms, estimated_branch, terminals: [[lat,lon],[lat,lon]],
///  ranked: [{branch_id, channel_id, delta_p_mw | delta_f_hz}], low_confidence,
///  noise_floor, error_miles?}
nlohmann::json localization_to_json(const LocalizationResult& result);
LocalizationResult localization_from_json(const nlohmann::json& doc);

/// GeoJSON FeatureCollection: one LineString per ranked branch carrying its
/// change, plus a MultiPoint marker at the estimated terminals. An empty ranking
/// gives an empty collection.
nlohmann::json localization_to_geojson(const LocalizationResult& result, const NetworkModel& net);

/// Factor table CSV `branch_id,from_bus,to_bus,<ptdf|lodf>` in branch order.
std::string factors_to_csv(const DistributionFactors& factors, const NetworkModel& net);

}  // namespace sentinel
