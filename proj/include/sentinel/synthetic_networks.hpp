#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sentinel/grid_model.hpp"

namespace sentinel {

// Small hand-built networks. Branch ids encode their endpoints where that
// reads naturally (K4 branch 13 joins buses 1 and 3). Reactances are equal
// unless stated, so the distribution factors have closed forms.

/// Two buses joined by two identical lines (ids 1 and 2), +100/-100 MW.
NetworkModel parallel_pair_network();
/// Buses 1..3, lines 12 (1->2), 13 (1->3), 32 (3->2); +100 MW at bus 1, -100 MW at bus 2.
NetworkModel triangle_network();
/// Complete graph on buses 1..4, lines 12 13 14 23 24 34; +100 MW at bus 1, -100 MW at bus 2.
NetworkModel k4_network();
/// Ring of 8 buses, line i joins bus i to bus i % 8 + 1.
NetworkModel ring8_network();

struct RandomNetworkOptions {
    int buses = 30;
    int extra_chords = 10;
    double min_reactance_pu = 0.01;
    double max_reactance_pu = 0.1;
    double max_injection_mw = 200.0;
};

/// Random spanning tree plus extra chords (no parallel lines), reactances
/// uniform in [min, max], random balanced injections, synthetic coordinates
/// in southern New England. Deterministic for a given seed.
NetworkModel random_network(std::uint64_t seed, const RandomNetworkOptions& options = {});

/// 39-bus, 46-branch "New England-style" synthetic system: a 14-bus
/// 3-edge-connected transmission core (21 lines) with 25 radially connected
/// buses. Every core line has |LODF| < 1 to every other line and carries a
/// sizeable pre-outage flow; radial lines are bridges.
NetworkModel ne39_network();

struct NamedFixture {
    std::string name;
    NetworkModel network;
};

/// The shipped fixtures in a fixed order: parallel_pair, triangle, k4, ring8, ne39.
std::vector<NamedFixture> shipped_fixtures();

}  // namespace sentinel
