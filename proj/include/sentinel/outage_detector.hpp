#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"
#include "sentinel/pmu_dataset.hpp"
#include "sentinel/signal_filters.hpp"

namespace sentinel {

/// Which deviation confirms a first-threshold crossing.
enum class SecondPeakRule {
    OppositeSign,  // a swing followed (or preceded) by a rebound
    SameSign,      // sensitivity variant
};

/// Where the confirming sample may sit relative to the crossing at i.
enum class ConfirmationSpan {
    Symmetric,  // 0 < |j - i| <= detection_window
    Forward,    // i < j <= i + detection_window
};

struct DetectorParams {
    FilterParams filter;
    std::size_t detection_window = 20;  // samples
    double first_threshold_hz = 0.0045;
    double second_threshold_hz = 0.0025;
    double cluster_window_s = 1.0;
    std::size_t min_channels = 1;
    SecondPeakRule second_peak = SecondPeakRule::OppositeSign;
    ConfirmationSpan confirmation = ConfirmationSpan::Symmetric;

    void validate() const;
};

struct ChannelTrigger {
    std::size_t sample_index = 0;
    std::int64_t timestamp_ms = 0;
    double peak_hz = 0.0;         // largest first-threshold deviation in the merged run
    double second_peak_hz = 0.0;  // confirming deviation for that peak
};

struct ChannelPeak {
    ChannelId channel_id = 0;
    double peak_hz = 0.0;
};

struct DetectionEvent {
    std::int64_t event_time_ms = 0;
    std::vector<ChannelPeak> channels;
    double first_peak_hz = 0.0;
    double second_peak_hz = 0.0;
};

/// Triggers on one frequency series. Pipeline: moving median -> moving-mean
/// trend -> de-trend, then a dual-threshold test on the deviation. Triggers
/// whose qualifying samples are within detection_window of each other are
/// merged, keeping the earliest sample as the trigger time.
std::vector<ChannelTrigger> detect_channel(std::span<const double> frequency_hz,
                                           std::span<const std::int64_t> timestamps_ms,
                                           const DetectorParams& params);

/// Same test applied to an already de-trended deviation series.
std::vector<ChannelTrigger> triggers_from_deviation(std::span<const double> deviation,
                                                    std::span<const std::int64_t> timestamps_ms,
                                                    const DetectorParams& params);

/// Runs detect_channel on every channel, then clusters triggers across
/// channels: a cluster opens at the earliest unassigned trigger and takes
/// every trigger within cluster_window_s of it; clusters with at least
/// min_channels distinct channels become events.
std::vector<DetectionEvent> detect(const PmuDataset& dataset, const DetectorParams& params);

nlohmann::json params_to_json(const DetectorParams& params);
nlohmann::json events_to_json(const std::vector<DetectionEvent>& events, const DetectorParams& params);
std::vector<DetectionEvent> events_from_json(const nlohmann::json& doc);

}  // namespace sentinel
