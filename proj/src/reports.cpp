#include "sentinel/reports.hpp"

#include <string>

#include "sentinel/error.hpp"
#include "sentinel/io_util.hpp"

namespace sentinel {

namespace {

const char* change_key(LocationMethod m) { return m == LocationMethod::PowerChange ? "delta_p_mw" : "delta_f_hz"; }

}  // namespace

std::string_view to_string(LocationMethod method) {
    return method == LocationMethod::PowerChange ? "power_change" : "max_freq_baseline";
}

LocationMethod location_method_from_string(std::string_view name) {
    if (name == "power_change") return LocationMethod::PowerChange;
    if (name == "max_freq_baseline") return LocationMethod::MaxFreqBaseline;
    throw Error(ErrorCode::SchemaError, "unknown localization method '" + std::string(name) + "'");
}

nlohmann::json localization_to_json(const LocalizationResult& result) {
    auto ranked = nlohmann::json::array();
    for (const auto& r : result.ranked)
        ranked.push_back({{"branch_id", r.branch_id}, {"channel_id", r.channel_id}, {change_key(result.method), r.signed_change}});
    nlohmann::json doc = {
        {"method", to_string(result.method)},
        {"event_time_ms", result.event_time_ms},
        {"estimated_branch", result.estimated_branch},
        {"estimated_channel", result.estimated_channel},
        {"terminals",
         {{result.estimated_terminals[0].lat, result.estimated_terminals[0].lon},
          {result.estimated_terminals[1].lat, result.estimated_terminals[1].lon}}},
        {"ranked", std::move(ranked)},
        {"low_confidence", result.low_confidence},
        {"noise_floor", result.noise_floor},
    };
    if (result.error_miles) doc["error_miles"] = *result.error_miles;
    return doc;
}

LocalizationResult localization_from_json(const nlohmann::json& doc) {
    try {
        LocalizationResult r;
        r.method = location_method_from_string(doc.at("method").get<std::string>());
        r.event_time_ms = doc.at("event_time_ms").get<std::int64_t>();
        r.estimated_branch = doc.at("estimated_branch").get<int>();
        r.estimated_channel = doc.value("estimated_channel", r.estimated_branch);
        const auto& t = doc.at("terminals");
        if (!t.is_array() || t.size() != 2) throw Error(ErrorCode::SchemaError, "localization: 'terminals' needs two points");
        for (std::size_t i = 0; i < 2; ++i)
            r.estimated_terminals[i] = GeoPoint{t[i].at(0).get<double>(), t[i].at(1).get<double>()};
        const char* key = change_key(r.method);
        for (const auto& item : doc.at("ranked")) {
            RankedChange c;
            c.branch_id = item.at("branch_id").get<int>();
            c.channel_id = item.value("channel_id", c.branch_id);
            c.signed_change = item.at(key).get<double>();
            c.magnitude = std::abs(c.signed_change);
            r.ranked.push_back(c);
        }
        r.low_confidence = doc.value("low_confidence", false);
        r.noise_floor = doc.value("noise_floor", 0.0);
        if (doc.contains("error_miles")) r.error_miles = doc.at("error_miles").get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaError, std::string("localization: ") + e.what());
    }
}

nlohmann::json localization_to_geojson(const LocalizationResult& result, const NetworkModel& net) {
    nlohmann::json doc = {{"type", "FeatureCollection"}, {"features", nlohmann::json::array()}};
    if (result.ranked.empty()) return doc;
    auto& features = doc["features"];
    const char* key = change_key(result.method);
    for (std::size_t i = 0; i < result.ranked.size(); ++i) {
        const auto& r = result.ranked[i];
        const auto& br = net.branch(r.branch_id);
        const auto& a = net.bus(br.from_bus);
        const auto& b = net.bus(br.to_bus);
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "LineString"}, {"coordinates", {{a.lon, a.lat}, {b.lon, b.lat}}}}},
                            {"properties",
                             {{"branch_id", r.branch_id},
                              {"channel_id", r.channel_id},
                              {key, r.signed_change},
                              {"magnitude", r.magnitude},
                              {"rank", i + 1}}}});
    }
    const auto& p = result.estimated_terminals;
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "MultiPoint"}, {"coordinates", {{p[0].lon, p[0].lat}, {p[1].lon, p[1].lat}}}}},
                        {"properties",
                         {{"kind", "event_marker"},
                          {"method", to_string(result.method)},
                          {"estimated_branch", result.estimated_branch},
                          {"event_time_ms", result.event_time_ms},
                          {"low_confidence", result.low_confidence}}}});
    return doc;
}

std::string factors_to_csv(const DistributionFactors& factors, const NetworkModel& net) {
    std::string out = "branch_id,from_bus,to_bus,";
    out += factors.kind == FactorKind::Ptdf ? "ptdf" : "lodf";
    out += '\n';
    for (const auto& br : net.branches()) {
        const auto it = factors.values.find(br.id);
        if (it == factors.values.end()) continue;
        out += std::to_string(br.id) + ',' + std::to_string(br.from_bus) + ',' + std::to_string(br.to_bus) + ',' +
               format_double(it->second) + '\n';
    }
    return out;
}

}  // namespace sentinel
