#include "sentinel/outage_locator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sentinel/error.hpp"
#include "sentinel/signal_filters.hpp"

namespace sentinel {

namespace {

double median_of(std::vector<double> values) {
    const std::size_t n = values.size();
    auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (n % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

// Sorts by descending magnitude; entries within a relative 1e-9 of the head
// of their group count as tied and are ordered by branch id.
void rank(std::vector<RankedChange>& ranked) {
    std::sort(ranked.begin(), ranked.end(), [](const RankedChange& a, const RankedChange& b) {
        return a.magnitude != b.magnitude ? a.magnitude > b.magnitude : a.branch_id < b.branch_id;
    });
    std::size_t start = 0;
    while (start < ranked.size()) {
        const double head = ranked[start].magnitude;
        const double tol = 1e-9 * std::max(1.0, head);
        std::size_t end = start + 1;
        while (end < ranked.size() && head - ranked[end].magnitude <= tol) ++end;
        std::sort(ranked.begin() + static_cast<std::ptrdiff_t>(start), ranked.begin() + static_cast<std::ptrdiff_t>(end),
                  [](const RankedChange& a, const RankedChange& b) { return a.branch_id < b.branch_id; });
        start = end;
    }
}

std::pair<std::size_t, std::size_t> pre_range(std::size_t e, const PowerChangeWindows& w) {
    return {e - w.pre_gap - w.pre_length, e - w.pre_gap};
}

template <typename SeriesOf>
LocalizationResult rank_channels(const PmuDataset& dataset, const DetectionEvent& event, const LocatorParams& params,
                                 LocationMethod method, SeriesOf series_of) {
    if (dataset.channels.empty()) throw Error(ErrorCode::NoMonitoredBranch, "dataset has no channels");
    params.windows.validate();
    const auto e = event_sample_index(dataset.timestamps_ms, event.event_time_ms);

    LocalizationResult out;
    out.method = method;
    out.event_time_ms = event.event_time_ms;
    std::vector<double> sigmas;
    for (const auto& ch : dataset.channels) {
        const std::span<const double> s = series_of(ch);
        const double delta = series_change(s, e, params.windows, params.median_window);
        out.ranked.push_back(RankedChange{ch.branch_id, ch.channel_id, std::abs(delta), delta});
        const auto [lo, hi] = pre_range(e, params.windows);
        sigmas.push_back(noise_sigma(s.subspan(lo, hi - lo)));
    }
    rank(out.ranked);
    out.noise_floor = median_of(sigmas);
    const double top = out.ranked.front().magnitude;
    out.low_confidence = top <= std::max(params.confidence_factor * out.noise_floor, params.min_resolvable);
    out.estimated_branch = out.ranked.front().branch_id;
    out.estimated_channel = out.ranked.front().channel_id;
    return out;
}

}  // namespace

void PowerChangeWindows::validate() const {
    if (pre_length < 1 || pre_gap < 1 || post_gap < 1 || post_length < 1)
        throw Error(ErrorCode::InvalidConfig, "power-change windows must all be >= 1 sample");
}

std::size_t event_sample_index(std::span<const std::int64_t> timestamps_ms, std::int64_t event_time_ms) {
    return static_cast<std::size_t>(std::lower_bound(timestamps_ms.begin(), timestamps_ms.end(), event_time_ms) -
                                    timestamps_ms.begin());
}

double series_change(std::span<const double> series, std::size_t event_index, const PowerChangeWindows& windows,
                     std::size_t median_window) {
    windows.validate();
    const std::size_t before = windows.pre_gap + windows.pre_length;
    const std::size_t after = windows.post_gap + windows.post_length;
    if (event_index < before || event_index + after > series.size())
        throw Error(ErrorCode::WindowOutOfRange, "windows around sample " + std::to_string(event_index) +
                                                     " do not fit in " + std::to_string(series.size()) + " samples");
    const auto filtered = moving_median(series, median_window);
    const auto first = filtered.begin();
    const auto pre_lo = static_cast<std::ptrdiff_t>(event_index - before);
    const auto pre_hi = static_cast<std::ptrdiff_t>(event_index - windows.pre_gap);
    const auto post_lo = static_cast<std::ptrdiff_t>(event_index + windows.post_gap);
    const auto post_hi = static_cast<std::ptrdiff_t>(event_index + after);
    return median_of({first + post_lo, first + post_hi}) - median_of({first + pre_lo, first + pre_hi});
}

double power_change(const PmuDataset& dataset, ChannelId channel, std::int64_t event_time_ms,
                    const PowerChangeWindows& windows, std::size_t median_window) {
    const auto& ch = dataset.channel(channel);
    return series_change(ch.active_power_mw, event_sample_index(dataset.timestamps_ms, event_time_ms), windows,
                         median_window);
}

double noise_sigma(std::span<const double> series) {
    if (series.size() < 3) return 0.0;
    std::vector<double> diffs;
    diffs.reserve(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i) diffs.push_back(series[i] - series[i - 1]);
    const double center = median_of(diffs);
    for (auto& d : diffs) d = std::abs(d - center);
    return 1.4826 * median_of(diffs) / std::sqrt(2.0);
}

LocalizationResult locate(const PmuDataset& dataset, const NetworkModel& net, const DetectionEvent& event,
                          const LocatorParams& params) {
    auto out = rank_channels(dataset, event, params, LocationMethod::PowerChange,
                             [](const PmuChannel& ch) { return std::span<const double>(ch.active_power_mw); });
    const auto& br = net.branch(out.estimated_branch);
    const auto& a = net.bus(br.from_bus);
    const auto& b = net.bus(br.to_bus);
    out.estimated_terminals = {GeoPoint{a.lat, a.lon}, GeoPoint{b.lat, b.lon}};
    return out;
}

LocalizationResult baseline_locate_freq(const PmuDataset& dataset, const DetectionEvent& event,
                                        const LocatorParams& params) {
    auto out = rank_channels(dataset, event, params, LocationMethod::MaxFreqBaseline,
                             [](const PmuChannel& ch) { return std::span<const double>(ch.frequency_hz); });
    const auto& ch = dataset.channel(out.estimated_channel);
    out.estimated_terminals = {GeoPoint{ch.lat, ch.lon}, GeoPoint{ch.lat, ch.lon}};
    return out;
}

double localization_error_miles(const LocalizationResult& result, const NetworkModel& net, BranchId actual_branch) {
    if (result.estimated_branch == actual_branch) return 0.0;
    const auto& br = net.branch(actual_branch);
    const auto& a = net.bus(br.from_bus);
    const auto& b = net.bus(br.to_bus);
    const GeoPoint actual[] = {{a.lat, a.lon}, {b.lat, b.lon}};
    return geo_error(result.estimated_terminals, actual);
}

std::map<BusId, double> bus_power_changes(const LocalizationResult& result, const NetworkModel& net) {
    std::map<BusId, double> out;
    for (const auto& r : result.ranked) {
        const auto& br = net.branch(r.branch_id);
        out[br.from_bus] += r.signed_change;
        out[br.to_bus] -= r.signed_change;
    }
    return out;
}

}  // namespace sentinel
