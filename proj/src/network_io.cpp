#include "sentinel/network_io.hpp"

#include "sentinel/error.hpp"
#include "sentinel/io_util.hpp"

namespace sentinel {

namespace {

template <typename T>
T required(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw Error(ErrorCode::SchemaError, where + ": missing field '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::SchemaError, where + ": field '" + key + "' has the wrong type");
    }
}

template <typename T>
T optional_field(const nlohmann::json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    return required<T>(obj, key, where);
}

}  // namespace

NetworkModel network_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "network: expected an object");
    if (!doc.contains("buses") || !doc["buses"].is_array())
        throw Error(ErrorCode::SchemaError, "network: 'buses' must be an array");
    if (!doc.contains("branches") || !doc["branches"].is_array())
        throw Error(ErrorCode::SchemaError, "network: 'branches' must be an array");

    std::vector<Bus> buses;
    for (std::size_t i = 0; i < doc["buses"].size(); ++i) {
        const auto& b = doc["buses"][i];
        const auto where = "buses[" + std::to_string(i) + "]";
        buses.push_back(Bus{required<int>(b, "id", where), required<double>(b, "lat", where),
                            required<double>(b, "lon", where), required<double>(b, "injection_mw", where)});
    }
    std::vector<Branch> branches;
    for (std::size_t k = 0; k < doc["branches"].size(); ++k) {
        const auto& b = doc["branches"][k];
        const auto where = "branches[" + std::to_string(k) + "]";
        Branch br;
        br.id = required<int>(b, "id", where);
        br.from_bus = required<int>(b, "from", where);
        br.to_bus = required<int>(b, "to", where);
        br.reactance_pu = required<double>(b, "reactance_pu", where);
        br.monitored = optional_field<bool>(b, "monitored", true, where);
        br.in_service = optional_field<bool>(b, "in_service", true, where);
        br.voltage_class = optional_field<std::string>(b, "voltage_class", "", where);
        branches.push_back(std::move(br));
    }
    return build_network(std::move(buses), std::move(branches), required<int>(doc, "slack_bus", "network"),
                         optional_field<double>(doc, "mva_base", kDefaultMvaBase, "network"));
}

nlohmann::json network_to_json(const NetworkModel& net) {
    nlohmann::json doc;
    auto& buses = doc["buses"] = nlohmann::json::array();
    for (const auto& b : net.buses())
        buses.push_back({{"id", b.id}, {"lat", b.lat}, {"lon", b.lon}, {"injection_mw", b.injection_mw}});
    auto& branches = doc["branches"] = nlohmann::json::array();
    for (const auto& br : net.branches()) {
        nlohmann::json j = {{"id", br.id},
                            {"from", br.from_bus},
                            {"to", br.to_bus},
                            {"reactance_pu", br.reactance_pu},
                            {"monitored", br.monitored}};
        if (!br.in_service) j["in_service"] = false;
        if (!br.voltage_class.empty()) j["voltage_class"] = br.voltage_class;
        branches.push_back(std::move(j));
    }
    doc["slack_bus"] = net.slack_bus();
    doc["mva_base"] = net.mva_base();
    return doc;
}

NetworkModel load_network(const std::filesystem::path& path) {
    return network_from_json(read_json_file(path));
}

void save_network(const NetworkModel& net, const std::filesystem::path& path) {
    write_text_file(path, network_to_json(net).dump(2) + "\n");
}

}  // namespace sentinel
