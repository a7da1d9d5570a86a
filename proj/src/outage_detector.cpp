#include "sentinel/outage_detector.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "sentinel/error.hpp"

namespace sentinel {

namespace {

bool confirms(double first, double candidate, const DetectorParams& params) {
    if (std::abs(candidate) < params.second_threshold_hz) return false;
    const bool opposite = (first > 0.0 && candidate < 0.0) || (first < 0.0 && candidate > 0.0);
    const bool same = (first > 0.0 && candidate > 0.0) || (first < 0.0 && candidate < 0.0);
    return params.second_peak == SecondPeakRule::OppositeSign ? opposite : same;
}

const char* to_string(SecondPeakRule r) { return r == SecondPeakRule::OppositeSign ? "opposite-sign" : "same-sign"; }
const char* to_string(ConfirmationSpan s) { return s == ConfirmationSpan::Symmetric ? "symmetric" : "forward"; }

}  // namespace

void DetectorParams::validate() const {
    filter.validate();
    if (detection_window < 2) throw Error(ErrorCode::InvalidConfig, "detection_window must be >= 2");
    if (!(second_threshold_hz > 0.0 && first_threshold_hz > second_threshold_hz))
        throw Error(ErrorCode::InvalidConfig, "thresholds must satisfy first > second > 0");
    if (!(cluster_window_s >= 0.0)) throw Error(ErrorCode::InvalidConfig, "cluster_window must be >= 0");
    if (min_channels < 1) throw Error(ErrorCode::InvalidConfig, "min_channels must be >= 1");
}

std::vector<ChannelTrigger> triggers_from_deviation(std::span<const double> deviation,
                                                    std::span<const std::int64_t> timestamps_ms,
                                                    const DetectorParams& params) {
    params.validate();
    if (deviation.size() != timestamps_ms.size())
        throw Error(ErrorCode::LengthMismatch, "deviation and timestamp series differ in length");

    const std::size_t n = deviation.size();
    const std::size_t w = params.detection_window;
    std::vector<ChannelTrigger> triggers;
    std::size_t open_until = 0;  // samples <= open_until belong to the last trigger
    bool open = false;

    for (std::size_t i = 0; i < n; ++i) {
        const double d = deviation[i];
        if (std::abs(d) < params.first_threshold_hz) continue;

        const std::size_t lo = params.confirmation == ConfirmationSpan::Symmetric ? (i > w ? i - w : 0) : i + 1;
        const std::size_t hi = std::min(n - 1, i + w);
        double best = 0.0;
        bool confirmed = false;
        for (std::size_t j = lo; j <= hi && j < n; ++j) {
            if (j == i || !confirms(d, deviation[j], params)) continue;
            if (!confirmed || std::abs(deviation[j]) > std::abs(best)) best = deviation[j];
            confirmed = true;
        }
        if (!confirmed) continue;

        if (open && i <= open_until) {
            auto& last = triggers.back();
            if (std::abs(d) > std::abs(last.peak_hz)) {
                last.peak_hz = d;
                last.second_peak_hz = best;
            }
            continue;
        }
        triggers.push_back(ChannelTrigger{i, timestamps_ms[i], d, best});
        open = true;
        open_until = i + w;
    }
    return triggers;
}

std::vector<ChannelTrigger> detect_channel(std::span<const double> frequency_hz,
                                           std::span<const std::int64_t> timestamps_ms,
                                           const DetectorParams& params) {
    params.validate();
    if (frequency_hz.size() <= params.filter.mean_window)
        throw Error(ErrorCode::SeriesTooShort, "series has " + std::to_string(frequency_hz.size()) +
                                                   " samples; need more than the mean window");
    return triggers_from_deviation(deviation_series(frequency_hz, params.filter), timestamps_ms, params);
}

std::vector<DetectionEvent> detect(const PmuDataset& dataset, const DetectorParams& params) {
    params.validate();
    if (dataset.channels.empty() || dataset.size() == 0) throw Error(ErrorCode::EmptyDataset, "dataset has no channels");
    dataset.validate();

    struct Tagged {
        ChannelTrigger trigger;
        ChannelId channel;
    };
    std::vector<Tagged> all;
    for (const auto& ch : dataset.channels)
        for (const auto& t : detect_channel(ch.frequency_hz, dataset.timestamps_ms, params))
            all.push_back(Tagged{t, ch.channel_id});
    std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) {
        return a.trigger.timestamp_ms != b.trigger.timestamp_ms ? a.trigger.timestamp_ms < b.trigger.timestamp_ms
                                                                : a.channel < b.channel;
    });

    const auto cluster_ms = static_cast<std::int64_t>(std::llround(params.cluster_window_s * 1000.0));
    std::vector<DetectionEvent> events;
    std::size_t i = 0;
    while (i < all.size()) {
        const auto start = all[i].trigger.timestamp_ms;
        std::map<ChannelId, ChannelTrigger> members;  // earliest trigger per channel
        for (; i < all.size() && all[i].trigger.timestamp_ms <= start + cluster_ms; ++i)
            members.emplace(all[i].channel, all[i].trigger);
        if (members.size() < params.min_channels) continue;

        DetectionEvent ev;
        ev.event_time_ms = start;
        const ChannelTrigger* strongest = nullptr;
        for (const auto& [id, t] : members) {
            ev.channels.push_back(ChannelPeak{id, t.peak_hz});
            if (!strongest || std::abs(t.peak_hz) > std::abs(strongest->peak_hz)) strongest = &t;
        }
        ev.first_peak_hz = strongest->peak_hz;
        ev.second_peak_hz = strongest->second_peak_hz;
        events.push_back(std::move(ev));
    }
    return events;
}

nlohmann::json params_to_json(const DetectorParams& params) {
    return {{"median_window", params.filter.median_window},
            {"mean_window", params.filter.mean_window},
            {"detection_window", params.detection_window},
            {"first_threshold_hz", params.first_threshold_hz},
            {"second_threshold_hz", params.second_threshold_hz},
            {"cluster_window_s", params.cluster_window_s},
            {"min_channels", params.min_channels},
            {"second_peak", to_string(params.second_peak)},
            {"confirmation", to_string(params.confirmation)}};
}

nlohmann::json events_to_json(const std::vector<DetectionEvent>& events, const DetectorParams& params) {
    auto out = nlohmann::json::array();
    for (const auto& ev : events) {
        auto channels = nlohmann::json::array();
        for (const auto& c : ev.channels) channels.push_back({{"channel_id", c.channel_id}, {"peak_hz", c.peak_hz}});
        out.push_back({{"event_time_ms", ev.event_time_ms},
                       {"channels", std::move(channels)},
                       {"first_peak_hz", ev.first_peak_hz},
                       {"second_peak_hz", ev.second_peak_hz},
                       {"params_echo", params_to_json(params)}});
    }
    return out;
}

std::vector<DetectionEvent> events_from_json(const nlohmann::json& doc) {
    const auto parse_one = [](const nlohmann::json& j) {
        if (!j.is_object() || !j.contains("event_time_ms"))
            throw Error(ErrorCode::SchemaError, "event: missing 'event_time_ms'");
        try {
            DetectionEvent ev;
            ev.event_time_ms = j.at("event_time_ms").get<std::int64_t>();
            if (j.contains("channels"))
                for (const auto& c : j.at("channels"))
                    ev.channels.push_back(ChannelPeak{c.at("channel_id").get<int>(), c.at("peak_hz").get<double>()});
            ev.first_peak_hz = j.value("first_peak_hz", 0.0);
            ev.second_peak_hz = j.value("second_peak_hz", 0.0);
            return ev;
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::SchemaError, std::string("event: ") + e.what());
        }
    };
    std::vector<DetectionEvent> events;
    if (doc.is_array()) {
        for (const auto& j : doc) events.push_back(parse_one(j));
    } else {
        events.push_back(parse_one(doc));
    }
    return events;
}

}  // namespace sentinel
