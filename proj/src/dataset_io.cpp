#include "sentinel/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "sentinel/error.hpp"
#include "sentinel/io_util.hpp"

namespace sentinel {

namespace {

constexpr std::string_view kHeader = "timestamp_ms,channel_id,branch_id,frequency_hz,active_power_mw";

template <typename T>
T parse_number(std::string_view text, const std::string& where) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw Error(ErrorCode::SchemaError, where + ": cannot parse '" + std::string(text) + "'");
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw Error(ErrorCode::SchemaError, where + ": non-finite value");
    }
    return value;
}

}  // namespace

const PmuChannel& PmuDataset::channel(ChannelId id) const {
    const auto it = std::lower_bound(channels.begin(), channels.end(), id,
                                     [](const PmuChannel& c, ChannelId v) { return c.channel_id < v; });
    if (it == channels.end() || it->channel_id != id)
        throw Error(ErrorCode::SchemaError, "no channel " + std::to_string(id));
    return *it;
}

void PmuDataset::validate() const {
    if (!(reporting_rate_hz > 0.0)) throw Error(ErrorCode::SchemaError, "reporting rate must be positive");
    for (std::size_t i = 1; i < timestamps_ms.size(); ++i)
        if (timestamps_ms[i] <= timestamps_ms[i - 1])
            throw Error(ErrorCode::SchemaError, "timestamps must strictly increase");
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const auto& ch = channels[c];
        if (c > 0 && ch.channel_id <= channels[c - 1].channel_id)
            throw Error(ErrorCode::SchemaError, "channel ids must be sorted and unique");
        if (ch.frequency_hz.size() != size() || ch.active_power_mw.size() != size())
            throw Error(ErrorCode::SchemaError, "channel " + std::to_string(ch.channel_id) + " length mismatch");
    }
}

void attach_locations(PmuDataset& dataset, const NetworkModel& net) {
    for (auto& ch : dataset.channels) {
        if (!net.has_branch(ch.branch_id))
            throw Error(ErrorCode::UnknownBranch, "dataset channel " + std::to_string(ch.channel_id) +
                                                      " refers to branch " + std::to_string(ch.branch_id));
        const auto& bus = net.bus(net.branch(ch.branch_id).from_bus);
        ch.terminal_bus = bus.id;
        ch.lat = bus.lat;
        ch.lon = bus.lon;
    }
}

PmuDataset concatenate(const PmuDataset& head, const PmuDataset& tail) {
    if (head.channels.size() != tail.channels.size())
        throw Error(ErrorCode::SchemaError, "datasets have different channel sets");
    if (!head.timestamps_ms.empty() && !tail.timestamps_ms.empty() &&
        tail.timestamps_ms.front() <= head.timestamps_ms.back())
        throw Error(ErrorCode::SchemaError, "second dataset must start after the first ends");
    PmuDataset out = head;
    out.timestamps_ms.insert(out.timestamps_ms.end(), tail.timestamps_ms.begin(), tail.timestamps_ms.end());
    for (std::size_t c = 0; c < out.channels.size(); ++c) {
        auto& dst = out.channels[c];
        const auto& src = tail.channels[c];
        if (dst.channel_id != src.channel_id) throw Error(ErrorCode::SchemaError, "datasets have different channel sets");
        dst.frequency_hz.insert(dst.frequency_hz.end(), src.frequency_hz.begin(), src.frequency_hz.end());
        dst.active_power_mw.insert(dst.active_power_mw.end(), src.active_power_mw.begin(), src.active_power_mw.end());
    }
    return out;
}

std::string dataset_to_csv(const PmuDataset& dataset) {
    dataset.validate();
    std::string out(kHeader);
    out += '\n';
    out.reserve(out.size() + dataset.size() * dataset.channels.size() * 56);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const auto ts = std::to_string(dataset.timestamps_ms[i]);
        for (const auto& ch : dataset.channels) {
            out += ts;
            out += ',';
            out += std::to_string(ch.channel_id);
            out += ',';
            out += std::to_string(ch.branch_id);
            out += ',';
            out += format_double(ch.frequency_hz[i]);
            out += ',';
            out += format_double(ch.active_power_mw[i]);
            out += '\n';
        }
    }
    return out;
}

PmuDataset dataset_from_csv(std::string_view text, std::string_view source_name) {
    const std::string src(source_name);
    std::size_t pos = 0;
    std::size_t line_no = 0;
    auto next_line = [&](std::string_view& line) {
        if (pos >= text.size()) return false;
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = end + 1;
        ++line_no;
        return true;
    };

    std::string_view line;
    if (!next_line(line) || line != kHeader)
        throw Error(ErrorCode::SchemaError, src + ":1: expected header '" + std::string(kHeader) + "'");

    struct Row {
        std::int64_t ts;
        int channel;
        int branch;
        double freq;
        double power;
        std::size_t line;
    };
    std::vector<Row> rows;
    while (next_line(line)) {
        if (line.empty()) continue;
        const auto where = src + ":" + std::to_string(line_no);
        std::string_view cols[5];
        std::size_t count = 0;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            if (count == 5) throw Error(ErrorCode::SchemaError, where + ": expected 5 columns");
            cols[count++] = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (count != 5) throw Error(ErrorCode::SchemaError, where + ": expected 5 columns, got " + std::to_string(count));
        rows.push_back(Row{parse_number<std::int64_t>(cols[0], where), parse_number<int>(cols[1], where),
                           parse_number<int>(cols[2], where), parse_number<double>(cols[3], where),
                           parse_number<double>(cols[4], where), line_no});
    }
    if (rows.empty()) throw Error(ErrorCode::EmptyDataset, src + ": no data rows");

    // channel set comes from the first tick
    std::map<int, int> branch_of;
    const auto first_ts = rows.front().ts;
    for (const auto& r : rows) {
        if (r.ts != first_ts) break;
        if (!branch_of.emplace(r.channel, r.branch).second)
            throw Error(ErrorCode::SchemaError, src + ":" + std::to_string(r.line) + ": duplicate channel in tick");
    }
    const std::size_t width = branch_of.size();
    if (rows.size() % width != 0)
        throw Error(ErrorCode::SchemaError, src + ":" + std::to_string(rows.back().line) +
                                                ": incomplete final tick (truncated file?)");

    PmuDataset ds;
    for (const auto& [ch, br] : branch_of) {
        PmuChannel c;
        c.channel_id = ch;
        c.branch_id = br;
        ds.channels.push_back(std::move(c));
    }
    const std::size_t ticks = rows.size() / width;
    ds.timestamps_ms.reserve(ticks);
    for (auto& c : ds.channels) {
        c.frequency_hz.reserve(ticks);
        c.active_power_mw.reserve(ticks);
    }
    for (std::size_t t = 0; t < ticks; ++t) {
        const auto ts = rows[t * width].ts;
        if (t > 0 && ts <= ds.timestamps_ms.back())
            throw Error(ErrorCode::SchemaError, src + ":" + std::to_string(rows[t * width].line) +
                                                    ": timestamps must strictly increase");
        ds.timestamps_ms.push_back(ts);
        for (std::size_t c = 0; c < width; ++c) {
            const auto& r = rows[t * width + c];
            auto& ch = ds.channels[c];
            if (r.ts != ts || r.channel != ch.channel_id || r.branch != ch.branch_id)
                throw Error(ErrorCode::SchemaError, src + ":" + std::to_string(r.line) +
                                                        ": rows must list every channel once per tick, sorted by channel id");
            ch.frequency_hz.push_back(r.freq);
            ch.active_power_mw.push_back(r.power);
        }
    }
    if (ticks < 2) throw Error(ErrorCode::SchemaError, src + ": need at least two ticks to infer the reporting rate");
    ds.reporting_rate_hz = 1000.0 * static_cast<double>(ticks - 1) /
                           static_cast<double>(ds.timestamps_ms.back() - ds.timestamps_ms.front());
    return ds;
}

void save_dataset_csv(const PmuDataset& dataset, const std::filesystem::path& path) {
    write_text_file(path, dataset_to_csv(dataset));
}

PmuDataset load_dataset_csv(const std::filesystem::path& path) {
    return dataset_from_csv(read_text_file(path), path.string());
}

}  // namespace sentinel
