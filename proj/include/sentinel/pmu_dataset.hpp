#pragma once

#include <cstdint>
#include <vector>

#include "sentinel/grid_model.hpp"

namespace sentinel {

using ChannelId = int;

/// One PMU channel: the MW flow of a branch and the local frequency,
/// measured at one terminal of that branch.
struct PmuChannel {
    ChannelId channel_id = 0;
    BranchId branch_id = 0;
    BusId terminal_bus = 0;
    double lat = 0.0;
    double lon = 0.0;
    std::vector<double> frequency_hz;
    std::vector<double> active_power_mw;
};

struct PmuDataset {
    double reporting_rate_hz = 25.0;
    std::vector<std::int64_t> timestamps_ms;
    std::vector<PmuChannel> channels;  // sorted by channel_id

    [[nodiscard]] std::size_t size() const noexcept { return timestamps_ms.size(); }
    [[nodiscard]] const PmuChannel& channel(ChannelId id) const;

    /// Throws SchemaError unless every series matches the timestamp count,
    /// timestamps strictly increase, and channel ids are sorted and unique.
    void validate() const;
};

/// Fills each channel's terminal bus and coordinates from the branch's
/// from-terminal in `net` (the PMU placement used by the simulator).
void attach_locations(PmuDataset& dataset, const NetworkModel& net);

/// Appends `tail` after `head`; both must carry the same channel ids and
/// `tail` must start after `head` ends.
PmuDataset concatenate(const PmuDataset& head, const PmuDataset& tail);

}  // namespace sentinel
