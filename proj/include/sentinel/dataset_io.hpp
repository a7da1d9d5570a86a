#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sentinel/pmu_dataset.hpp"

namespace sentinel {

// Dataset CSV: header `timestamp_ms,channel_id,branch_id,frequency_hz,active_power_mw`,
// one row per channel per tick, sorted by timestamp then channel id.

std::string dataset_to_csv(const PmuDataset& dataset);
/// Errors carry the 1-based line number of the offending row.
PmuDataset dataset_from_csv(std::string_view text, std::string_view source_name = "<csv>");

void save_dataset_csv(const PmuDataset& dataset, const std::filesystem::path& path);
PmuDataset load_dataset_csv(const std::filesystem::path& path);

}  // namespace sentinel
