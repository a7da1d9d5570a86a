#include <cmath>
#include <random>

#include "doctest.h"
#include "sentinel/error.hpp"
#include "sentinel/outage_detector.hpp"
#include "sentinel/scenario_sim.hpp"
#include "sentinel/synthetic_networks.hpp"

using namespace sentinel;

namespace {

std::vector<std::int64_t> ticks(std::size_t n, std::int64_t start = 0) {
    std::vector<std::int64_t> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = start + static_cast<std::int64_t>(40 * i);
    return t;
}

std::vector<double> gaussian(std::size_t n, double sigma, std::uint64_t seed, double mean = 60.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(mean, sigma);
    std::vector<double> x(n);
    for (auto& v : x) v = g(rng);
    return x;
}

ScenarioConfig k4_scenario(std::uint64_t seed, double start_s = 0.0) {
    ScenarioConfig cfg;
    cfg.network = k4_network();
    cfg.outaged_branch = 12;
    cfg.event_time_s = 10.0;
    cfg.duration_s = 60.0;
    cfg.start_time_ms = 1'600'000'000'000 + static_cast<std::int64_t>(start_s * 1000.0);
    cfg.noise.rng_seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("parameter validation") {
    DetectorParams p;
    CHECK_NOTHROW(p.validate());
    p.first_threshold_hz = 0.002;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.detection_window = 1;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.filter.mean_window = 30;
    CHECK_THROWS_AS(p.validate(), Error);
    p = {};
    p.min_channels = 0;
    CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("swing then rebound fires one trigger") {
    std::vector<double> dev(200, 0.0);
    dev[100] = 0.005;
    dev[101] = 0.004;
    dev[112] = -0.003;
    const auto t = triggers_from_deviation(dev, ticks(200), DetectorParams{});
    REQUIRE(t.size() == 1);
    CHECK(t[0].sample_index == 100);
    CHECK(t[0].timestamp_ms == 4000);
    CHECK(t[0].peak_hz == 0.005);
    CHECK(t[0].second_peak_hz == -0.003);
}

TEST_CASE("second-peak rule variants") {
    std::vector<double> dev(200, 0.0);
    dev[100] = 0.005;
    dev[110] = 0.003;  // same sign only
    DetectorParams p;
    CHECK(triggers_from_deviation(dev, ticks(200), p).empty());
    p.second_peak = SecondPeakRule::SameSign;
    CHECK(triggers_from_deviation(dev, ticks(200), p).size() == 1);

    // rebound outside the window, or below the second threshold
    dev.assign(200, 0.0);
    dev[100] = -0.006;
    dev[121] = 0.004;
    CHECK(triggers_from_deviation(dev, ticks(200), DetectorParams{}).empty());
    dev[120] = 0.0024;
    CHECK(triggers_from_deviation(dev, ticks(200), DetectorParams{}).empty());
    dev[120] = 0.0025;
    CHECK(triggers_from_deviation(dev, ticks(200), DetectorParams{}).size() == 1);
}

TEST_CASE("confirmation span variants") {
    std::vector<double> dev(200, 0.0);
    dev[90] = -0.003;  // rebound precedes the main lobe
    dev[100] = 0.005;
    DetectorParams p;
    CHECK(triggers_from_deviation(dev, ticks(200), p).size() == 1);
    p.confirmation = ConfirmationSpan::Forward;
    CHECK(triggers_from_deviation(dev, ticks(200), p).empty());
    dev[105] = -0.003;
    CHECK(triggers_from_deviation(dev, ticks(200), p).size() == 1);
}

TEST_CASE("qualifying samples within the window merge into the earliest") {
    std::vector<double> dev(300, 0.0);
    dev[100] = 0.005;
    dev[103] = -0.004;
    dev[110] = 0.007;
    dev[118] = -0.003;
    dev[150] = 0.006;
    dev[160] = -0.003;
    const auto t = triggers_from_deviation(dev, ticks(300), DetectorParams{});
    REQUIRE(t.size() == 2);
    CHECK(t[0].sample_index == 100);
    CHECK(t[0].peak_hz == 0.007);
    CHECK(t[1].sample_index == 150);
}

TEST_CASE("Gaussian noise with sigma 0.5 mHz never triggers") {
    const std::size_t n = 10 * 60 * 25;
    const auto ts = ticks(n);
    for (std::uint64_t seed = 1; seed <= 100; ++seed)
        CHECK(detect_channel(gaussian(n, 0.0005, seed), ts, DetectorParams{}).empty());
}

TEST_CASE("constant offset never triggers") {
    const std::vector<double> f(3000, 60.01);
    CHECK(detect_channel(f, ticks(3000), DetectorParams{}).empty());
}

TEST_CASE("series must be longer than the mean window") {
    const std::vector<double> f(31, 60.0);
    try {
        detect_channel(f, ticks(31), DetectorParams{});
        FAIL("expected SeriesTooShort");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SeriesTooShort);
    }
    CHECK(detect_channel(std::vector<double>(32, 60.0), ticks(32), DetectorParams{}).empty());
}

TEST_CASE("K4 scenario yields exactly one event near the trip") {
    const auto cfg = k4_scenario(7);
    const auto events = detect(simulate_scenario(cfg), DetectorParams{});
    REQUIRE(events.size() == 1);
    const auto truth = cfg.start_time_ms + 10'000;
    CHECK(std::abs(events[0].event_time_ms - truth) <= 500);
    CHECK(std::abs(events[0].first_peak_hz) >= 0.0045);
    CHECK(std::abs(events[0].second_peak_hz) >= 0.0025);
    CHECK(events[0].channels.size() >= 1);
    for (const auto& c : events[0].channels) CHECK(std::abs(c.peak_hz) >= 0.0045);
}

TEST_CASE("event-free noisy K4 streams raise no alarm") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto cfg = k4_scenario(seed);
        cfg.freq_signature.peak_deviation_hz = 0.0;
        CHECK(detect(simulate_scenario(cfg), DetectorParams{}).empty());
    }
}

TEST_CASE("two scenarios 60 s apart give two ordered events") {
    const auto a = simulate_scenario(k4_scenario(3));
    const auto b = simulate_scenario(k4_scenario(4, 60.0));
    const auto events = detect(concatenate(a, b), DetectorParams{});
    REQUIRE(events.size() == 2);
    CHECK(events[0].event_time_ms < events[1].event_time_ms);
    CHECK(std::abs(events[0].event_time_ms - (a.timestamps_ms.front() + 10'000)) <= 500);
    CHECK(std::abs(events[1].event_time_ms - (b.timestamps_ms.front() + 10'000)) <= 500);
}

TEST_CASE("min_channels gates events") {
    const auto ds = simulate_scenario(k4_scenario(7));
    DetectorParams p;
    p.min_channels = 7;  // more channels than K4 has
    CHECK(detect(ds, p).empty());
}

TEST_CASE("empty dataset is an error") {
    PmuDataset ds;
    try {
        detect(ds, DetectorParams{});
        FAIL("expected EmptyDataset");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyDataset);
    }
}

TEST_CASE("raising the first threshold never adds triggers") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto cfg = k4_scenario(seed);
        cfg.noise.gaussian_sigma_hz = 0.002;
        const auto ds = simulate_scenario(cfg);
        for (const auto& ch : ds.channels) {
            std::size_t previous = SIZE_MAX;
            for (double th = 0.0026; th <= 0.012; th += 0.0004) {
                DetectorParams p;
                p.first_threshold_hz = th;
                const auto count = detect_channel(ch.frequency_hz, ds.timestamps_ms, p).size();
                CHECK(count <= previous);
                previous = count;
            }
        }
    }
}

TEST_CASE("delaying the input delays every trigger by the same samples") {
    const auto ds = simulate_scenario(k4_scenario(11));
    const auto& f = ds.channels[0].frequency_hz;
    const auto base = detect_channel(f, ds.timestamps_ms, DetectorParams{});
    REQUIRE_FALSE(base.empty());
    for (const std::size_t k : {1u, 7u, 50u}) {
        std::vector<double> shifted(k, f.front());
        shifted.insert(shifted.end(), f.begin(), f.end() - static_cast<std::ptrdiff_t>(k));
        const auto moved = detect_channel(shifted, ds.timestamps_ms, DetectorParams{});
        REQUIRE(moved.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(moved[i].sample_index == base[i].sample_index + k);
            CHECK(moved[i].peak_hz == base[i].peak_hz);
        }
    }
}

TEST_CASE("trigger lands within the latency bound of the first crossing") {
    const DetectorParams p;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto ds = simulate_scenario(k4_scenario(seed));
        for (const auto& ch : ds.channels) {
            const auto dev = deviation_series(ch.frequency_hz, p.filter);
            const auto triggers = triggers_from_deviation(dev, ds.timestamps_ms, p);
            if (triggers.empty()) continue;
            std::size_t crossing = 0;
            while (std::abs(dev[crossing]) < p.first_threshold_hz) ++crossing;
            CHECK(triggers.front().sample_index <= crossing + p.detection_window + p.filter.mean_window / 2);
        }
    }
}

TEST_CASE("detection is deterministic and events survive JSON") {
    const auto ds = simulate_scenario(k4_scenario(5));
    const DetectorParams p;
    const auto a = detect(ds, p);
    const auto b = detect(ds, p);
    CHECK(events_to_json(a, p).dump() == events_to_json(b, p).dump());

    const auto doc = events_to_json(a, p);
    REQUIRE(doc.is_array());
    CHECK(doc[0].contains("params_echo"));
    CHECK(doc[0]["params_echo"]["first_threshold_hz"] == 0.0045);
    const auto back = events_from_json(doc);
    REQUIRE(back.size() == a.size());
    CHECK(back[0].event_time_ms == a[0].event_time_ms);
    CHECK(back[0].channels.size() == a[0].channels.size());
    CHECK(events_to_json(back, p) == doc);
    CHECK(events_from_json(doc[0]).size() == 1);
    CHECK_THROWS_AS(events_from_json(nlohmann::json{{"channels", 3}}), Error);
}
