// Regenerates the JSON fixtures under data/fixtures.
#include <filesystem>
#include <iostream>

#include "sentinel/io_util.hpp"
#include "sentinel/network_io.hpp"
#include "sentinel/synthetic_networks.hpp"

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "data/fixtures";
    std::filesystem::create_directories(dir);
    for (const auto& f : sentinel::shipped_fixtures()) {
        sentinel::save_network(f.network, dir / (f.name + ".json"));
        std::cout << "wrote " << (dir / (f.name + ".json")).string() << "\n";
    }
    // a scenario that trips K4 line 13 at t = 10 s
    const nlohmann::json scenario = {
        {"network", "k4.json"},
        {"outaged_branch", 13},
        {"event_time", 10.0},
        {"duration", 30.0},
        {"reporting_rate", 25.0},
        {"noise", {{"gaussian_sigma_hz", 0.001}, {"gaussian_sigma_mw", 0.5}, {"rng_seed", 7}}},
    };
    sentinel::write_text_file(dir / "k4_scenario.json", scenario.dump(2) + "\n");
    std::cout << "wrote " << (dir / "k4_scenario.json").string() << "\n";
    return 0;
}
