#include <cmath>

#include "doctest.h"
#include "sentinel/error.hpp"
#include "sentinel/grid_model.hpp"
#include "sentinel/synthetic_networks.hpp"

using namespace sentinel;

namespace {

NetworkModel two_bus(double x = 0.1) {
    return build_network({{1, 41.0, -72.0, 100.0}, {2, 41.1, -72.1, -100.0}}, {{1, 1, 2, x}}, 1, 100.0);
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

std::vector<NetworkModel> sweep_networks() {
    std::vector<NetworkModel> nets;
    for (auto& f : shipped_fixtures()) nets.push_back(std::move(f.network));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) nets.push_back(random_network(seed, {.buses = 50, .extra_chords = 20}));
    return nets;
}

}  // namespace

TEST_CASE("build_network accepts minimal and K4 models") {
    const auto net = two_bus();
    CHECK(net.buses().size() == 2);
    CHECK(net.branches().size() == 1);
    const auto k4 = k4_network();
    CHECK(k4.buses().size() == 4);
    CHECK(k4.branches().size() == 6);
    CHECK(k4.mva_base() == 100.0);
}

TEST_CASE("build_network rejects malformed input") {
    const std::vector<Bus> four = {{1, 41, -72, 0}, {2, 41, -72, 0}, {3, 41, -72, 0}, {4, 41, -72, 0}};
    CHECK(code_of([&] { build_network(four, {{1, 1, 2, 0.1}, {2, 3, 4, 0.1}}, 1, 100); }) ==
          ErrorCode::DisconnectedGraph);
    CHECK(code_of([&] { build_network(four, {{1, 1, 2, 0.1}, {1, 2, 3, 0.1}, {3, 3, 4, 0.1}}, 1, 100); }) ==
          ErrorCode::DuplicateId);
    CHECK(code_of([&] { build_network({{1, 41, -72, 0}, {1, 41, -72, 0}}, {{1, 1, 1, 0.1}}, 1, 100); }) ==
          ErrorCode::DuplicateId);
    CHECK(code_of([&] { build_network(four, {{1, 1, 2, 0.0}, {2, 2, 3, 0.1}, {3, 3, 4, 0.1}}, 1, 100); }) ==
          ErrorCode::NonpositiveReactance);
    CHECK(code_of([&] { build_network(four, {{1, 1, 2, 0.1}, {2, 2, 3, 0.1}, {3, 3, 4, 0.1}}, 9, 100); }) ==
          ErrorCode::UnknownSlack);
    CHECK(code_of([&] { build_network(four, {{1, 1, 2, 0.1}, {2, 2, 7, 0.1}, {3, 3, 4, 0.1}}, 1, 100); }) ==
          ErrorCode::UnknownBus);
    CHECK(code_of([&] { build_network(four, {{1, 1, 1, 0.1}, {2, 2, 3, 0.1}, {3, 3, 4, 0.1}}, 1, 100); }) ==
          ErrorCode::SelfLoop);
    CHECK(code_of([&] { build_network({{1, 95.0, -72, 0}, {2, 41, -72, 0}}, {{1, 1, 2, 0.1}}, 1, 100); }) ==
          ErrorCode::InvalidCoordinate);
    CHECK(code_of([&] { build_network({{1, 41, -72, 10}, {2, 41, -72, 0}}, {{1, 1, 2, 0.1}}, 1, 100); }) ==
          ErrorCode::UnbalancedInjections);
}

TEST_CASE("small imbalance is absorbed by the slack") {
    const auto net = build_network({{1, 41, -72, 100.0}, {2, 41, -72, -100.0 + 5e-7}}, {{1, 1, 2, 0.1}}, 2, 100);
    double total = 0.0;
    for (const auto& b : net.buses()) total += b.injection_mw;
    CHECK(std::abs(total) <= 1e-9);
}

TEST_CASE("dc_power_flow on closed-form cases") {
    CHECK(dc_power_flow(two_bus()).at(1) == doctest::Approx(100.0).epsilon(1e-12));

    const auto tri = dc_power_flow(triangle_network());
    CHECK(tri.at(12) == doctest::Approx(200.0 / 3.0).epsilon(1e-12));
    CHECK(tri.at(13) == doctest::Approx(100.0 / 3.0).epsilon(1e-12));
    CHECK(tri.at(32) == doctest::Approx(100.0 / 3.0).epsilon(1e-12));

    auto buses = k4_network().buses();
    for (auto& b : buses) b.injection_mw = 0.0;
    const auto zero = dc_power_flow(build_network(buses, k4_network().branches(), 1, 100));
    for (const auto& [id, f] : zero) CHECK(f == 0.0);
}

TEST_CASE("ptdf oracle values") {
    const auto tri = ptdf(triangle_network(), {1, 2, 1.0});
    CHECK(tri.values.at(12) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(tri.values.at(13) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(tri.values.at(32) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    const auto k4 = ptdf(k4_network(), {1, 2, 1.0});
    CHECK(k4.values.at(12) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(k4.values.at(13) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(k4.values.at(14) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(k4.values.at(23) == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(k4.values.at(24) == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(std::abs(k4.values.at(34)) <= 1e-12);

    // radial lines of the 39-bus fixture are bridges; a transfer across one
    // puts the whole amount on it
    const auto ne = ne39_network();
    for (const auto& br : ne.branches()) {
        if (!is_bridge(ne, br.id)) continue;
        const auto f = ptdf(ne, {br.from_bus, br.to_bus, 1.0});
        CHECK(std::abs(std::abs(f.values.at(br.id)) - 1.0) <= 1e-12);
    }
}

TEST_CASE("ptdf rejects a degenerate transaction") {
    CHECK(code_of([] { ptdf(k4_network(), {1, 1, 1.0}); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([] { ptdf(k4_network(), {1, 2, 0.0}); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([] { ptdf(k4_network(), {1, 9, 1.0}); }) == ErrorCode::UnknownBus);
}

TEST_CASE("lodf oracle values") {
    const auto pair = lodf(parallel_pair_network(), 1);
    CHECK(pair.values.at(2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(pair.values.contains(1));

    const auto k4 = lodf(k4_network(), 12);
    CHECK(k4.values.at(13) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(k4.values.at(14) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(k4.values.at(23) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(k4.values.at(24) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::abs(k4.values.at(34)) <= 1e-12);

    CHECK(code_of([] { lodf(two_bus(), 1); }) == ErrorCode::IslandingOutage);
    CHECK(code_of([] { lodf(k4_network(), 99); }) == ErrorCode::UnknownBranch);
}

TEST_CASE("predicted_flow_change oracle values") {
    const auto k4 = predicted_flow_change(k4_network(), 12);
    CHECK(k4.at(13) == doctest::Approx(25.0).epsilon(1e-12));
    CHECK(k4.at(12) == doctest::Approx(-50.0).epsilon(1e-12));

    const auto pair = predicted_flow_change(parallel_pair_network(), 1);
    CHECK(pair.at(2) == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(pair.at(1) == doctest::Approx(-50.0).epsilon(1e-12));

    // K4 line 34 carries no flow for a 1 -> 2 transfer
    const auto idle = predicted_flow_change(k4_network(), 34);
    for (const auto& [id, d] : idle) CHECK(std::abs(d) <= 1e-9);
}

TEST_CASE("kcl_residual") {
    const auto net = k4_network();
    auto flows = dc_power_flow(net);
    for (const auto& b : net.buses()) CHECK(kcl_residual(net, flows, b.id) <= 1e-9);

    flows.at(13) += 1.0;
    CHECK(kcl_residual(net, flows, 1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(kcl_residual(net, flows, 3) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(kcl_residual(net, flows, 2) <= 1e-9);
    CHECK(code_of([&] { kcl_residual(net, flows, 42); }) == ErrorCode::UnknownBus);

    // the change of flows sums to zero at buses without injection or terminal
    const auto pre = dc_power_flow(net);
    const auto post = dc_power_flow(apply_outage(net, 12));
    BranchFlows delta;
    for (const auto& [id, p] : pre) delta[id] = (post.contains(id) ? post.at(id) : 0.0) - p;
    CHECK(std::abs(net_outflow(net, delta, 3)) <= 1e-9);
    CHECK(std::abs(net_outflow(net, delta, 4)) <= 1e-9);
}

TEST_CASE("apply_outage") {
    const auto k4 = apply_outage(k4_network(), 12);
    CHECK(k4.in_service_branch_ids().size() == 5);
    CHECK_FALSE(k4.branch(12).in_service);
    CHECK(code_of([] { apply_outage(two_bus(), 1); }) == ErrorCode::IslandingOutage);
    CHECK(code_of([] { apply_outage(k4_network(), 77); }) == ErrorCode::UnknownBranch);
    CHECK(code_of([&] { apply_outage(k4, 12); }) == ErrorCode::BranchOutOfService);

    const auto tri = dc_power_flow(apply_outage(triangle_network(), 12));
    CHECK(tri.at(13) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK_FALSE(tri.contains(12));
}

TEST_CASE("outage prediction equals a full re-solve") {
    for (const auto& net : sweep_networks()) {
        const auto pre = dc_power_flow(net);
        for (const auto id : net.in_service_branch_ids()) {
            if (is_bridge(net, id)) continue;
            const auto predicted = predicted_flow_change(net, id);
            const auto post = dc_power_flow(apply_outage(net, id));
            double worst = 0.0;
            for (const auto& [k, p] : pre) {
                const double actual = (k == id ? 0.0 : post.at(k)) - p;
                worst = std::max(worst, std::abs(predicted.at(k) - actual));
            }
            CHECK(worst <= 1e-9 * net.mva_base());
        }
    }
}

TEST_CASE("factor bounds and KCL across the sweep") {
    for (const auto& net : sweep_networks()) {
        const DcSolver solver(net);
        const auto flows = dc_power_flow(net);
        for (const auto& b : net.buses()) CHECK(kcl_residual(net, flows, b.id) <= 1e-9);
        for (const auto id : net.in_service_branch_ids()) {
            const auto& br = net.branch(id);
            for (const auto& [k, v] : ptdf(solver, {br.from_bus, br.to_bus, 1.0}).values)
                CHECK(std::abs(v) <= 1.0 + 1e-12);
            if (is_bridge(net, id)) continue;
            for (const auto& [k, v] : lodf(solver, id).values) CHECK(std::abs(v) <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("ptdf is independent of the transfer size") {
    const auto net = random_network(5);
    const auto small = ptdf(net, {net.buses()[3].id, net.buses()[17].id, 1.0});
    const auto large = ptdf(net, {net.buses()[3].id, net.buses()[17].id, 1000.0});
    for (const auto& [k, v] : small.values) CHECK(std::abs(v - large.values.at(k)) <= 1e-12);
}

TEST_CASE("outaged line has the largest flow change when every |lodf| < 1") {
    int checked = 0;
    for (const auto& net : sweep_networks()) {
        const DcSolver solver(net);
        const auto pre = dc_power_flow(net);
        for (const auto id : net.in_service_branch_ids()) {
            if (is_bridge(net, id) || std::abs(pre.at(id)) < 1e-6) continue;
            const auto z = lodf(solver, id);
            bool strict = true;
            for (const auto& [k, v] : z.values) strict = strict && std::abs(v) < 1.0 - 1e-9;
            if (!strict) continue;
            const auto d = predicted_flow_change(solver, pre, id);
            for (const auto& [k, v] : d)
                if (k != id) CHECK(std::abs(v) < std::abs(d.at(id)));
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("39-bus fixture shape") {
    const auto net = ne39_network();
    CHECK(net.buses().size() == 39);
    CHECK(net.branches().size() == 46);
    int bridges = 0;
    for (const auto& br : net.branches()) bridges += is_bridge(net, br.id) ? 1 : 0;
    CHECK(bridges == 25);
}
