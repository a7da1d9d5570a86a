#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sentinel/geo.hpp"
#include "sentinel/grid_model.hpp"
#include "sentinel/outage_detector.hpp"
#include "sentinel/pmu_dataset.hpp"

namespace sentinel {

/// Sample windows around the event index e:
/// pre  = [e - pre_gap - pre_length, e - pre_gap)
/// post = [e + post_gap, e + post_gap + post_length)
struct PowerChangeWindows {
    std::size_t pre_length = 50;
    std::size_t pre_gap = 10;
    std::size_t post_gap = 25;
    std::size_t post_length = 50;

    void validate() const;
};

struct LocatorParams {
    PowerChangeWindows windows;
    std::size_t median_window = 7;
    /// Result is flagged low-confidence when the top change is at most this
    /// multiple of the estimated per-sample noise floor.
    double confidence_factor = 3.0;
    /// Changes at or below this magnitude are treated as no change at all.
    double min_resolvable = 1e-6;
};

enum class LocationMethod { PowerChange, MaxFreqBaseline };

struct RankedChange {
    BranchId branch_id = 0;
    ChannelId channel_id = 0;
    double magnitude = 0.0;
    double signed_change = 0.0;  // MW for PowerChange, Hz for MaxFreqBaseline
};

struct LocalizationResult {
    LocationMethod method = LocationMethod::PowerChange;
    std::int64_t event_time_ms = 0;
    std::vector<RankedChange> ranked;  // descending magnitude, ties by lowest branch id
    BranchId estimated_branch = 0;
    ChannelId estimated_channel = 0;
    std::array<GeoPoint, 2> estimated_terminals{};
    bool low_confidence = false;
    double noise_floor = 0.0;
    std::optional<double> error_miles;
};

/// Index of the first sample at or after `event_time_ms`.
std::size_t event_sample_index(std::span<const std::int64_t> timestamps_ms, std::int64_t event_time_ms);

/// median(post window) - median(pre window) of the median-filtered series.
double series_change(std::span<const double> series, std::size_t event_index, const PowerChangeWindows& windows,
                     std::size_t median_window);

double power_change(const PmuDataset& dataset, ChannelId channel, std::int64_t event_time_ms,
                    const PowerChangeWindows& windows, std::size_t median_window = 7);

/// Robust per-sample noise estimate of a series over a sample range:
/// 1.4826 * MAD(first differences) / sqrt(2).
double noise_sigma(std::span<const double> series);

/// Ranks |dP| over every channel; the estimate is the top branch, reported
/// with both of its terminal coordinates from `net`.
LocalizationResult locate(const PmuDataset& dataset, const NetworkModel& net, const DetectionEvent& event,
                          const LocatorParams& params = {});

/// Ranks channels by |df| built the same way; the estimate is the PMU
/// location of the top channel (both terminals set to that point).
LocalizationResult baseline_locate_freq(const PmuDataset& dataset, const DetectionEvent& event,
                                        const LocatorParams& params = {});

/// Geographic error against the actually tripped branch: 0 when the
/// estimated branch is the tripped one, otherwise the smallest terminal to
/// terminal distance.
double localization_error_miles(const LocalizationResult& result, const NetworkModel& net, BranchId actual_branch);

/// Diagnostic: signed net outflow change per bus summed over the ranked
/// branches incident to it.
std::map<BusId, double> bus_power_changes(const LocalizationResult& result, const NetworkModel& net);

}  // namespace sentinel
