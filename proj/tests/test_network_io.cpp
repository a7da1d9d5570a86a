#include <filesystem>

#include "doctest.h"
#include "sentinel/error.hpp"
#include "sentinel/io_util.hpp"
#include "sentinel/network_io.hpp"
#include "sentinel/synthetic_networks.hpp"

using namespace sentinel;

namespace {

const std::filesystem::path kFixtures = SENTINEL_FIXTURE_DIR;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("shipped fixture files match the generators") {
    for (const auto& f : shipped_fixtures()) {
        CAPTURE(f.name);
        const auto on_disk = read_json_file(kFixtures / (f.name + ".json"));
        CHECK(on_disk == network_to_json(f.network));
    }
}

TEST_CASE("network JSON round trip") {
    const auto net = ne39_network();
    const auto back = network_from_json(network_to_json(net));
    REQUIRE(back.branches().size() == net.branches().size());
    for (std::size_t k = 0; k < net.branches().size(); ++k) {
        CHECK(back.branches()[k].id == net.branches()[k].id);
        CHECK(back.branches()[k].reactance_pu == net.branches()[k].reactance_pu);
        CHECK(back.branches()[k].voltage_class == net.branches()[k].voltage_class);
        CHECK(back.branches()[k].monitored == net.branches()[k].monitored);
    }
    for (std::size_t i = 0; i < net.buses().size(); ++i) {
        CHECK(back.buses()[i].lat == net.buses()[i].lat);
        CHECK(back.buses()[i].injection_mw == net.buses()[i].injection_mw);
    }
    CHECK(back.slack_bus() == net.slack_bus());
}

TEST_CASE("network JSON schema errors") {
    auto doc = network_to_json(k4_network());
    doc["branches"][2].erase("reactance_pu");
    CHECK(code_of([&] { network_from_json(doc); }) == ErrorCode::SchemaError);

    doc = network_to_json(k4_network());
    doc["buses"][0]["lat"] = "north";
    CHECK(code_of([&] { network_from_json(doc); }) == ErrorCode::SchemaError);

    doc = network_to_json(k4_network());
    doc.erase("slack_bus");
    CHECK(code_of([&] { network_from_json(doc); }) == ErrorCode::SchemaError);

    CHECK(code_of([] { network_from_json(nlohmann::json::array()); }) == ErrorCode::SchemaError);
}

TEST_CASE("missing file and malformed JSON") {
    CHECK(code_of([] { load_network("/nonexistent/net.json"); }) == ErrorCode::IoError);
    try {
        parse_json("{\n  \"buses\": [1,\n  }", "net.json");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("net.json:3:") != std::string::npos);
    }
}

TEST_CASE("format_double round trips") {
    for (const double v : {0.1, 1.0 / 3.0, 59.99882295426248, -1e-300, 123456789.0, 60.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(60.0) == "60");
}

TEST_CASE("exit codes by error family") {
    CHECK(exit_code_for(ErrorCode::IslandingOutage) == 4);
    CHECK(exit_code_for(ErrorCode::SingularSystem) == 4);
    CHECK(exit_code_for(ErrorCode::DisconnectedGraph) == 4);
    CHECK(exit_code_for(ErrorCode::SchemaError) == 3);
    CHECK(exit_code_for(ErrorCode::ParseError) == 3);
    CHECK(exit_code_for(ErrorCode::IoError) == 3);
}
