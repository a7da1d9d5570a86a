#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"
#include "sentinel/grid_model.hpp"
#include "sentinel/pmu_dataset.hpp"

namespace sentinel {

struct NoiseConfig {
    double gaussian_sigma_hz = 0.001;
    double gaussian_sigma_mw = 0.5;
    double spike_probability = 0.005;  // per frequency sample
    double spike_amplitude_hz = 0.05;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// Frequency excursion A * (exp(-t/decay) - exp(-t/rise)) with A scaled so
/// the maximum equals peak_deviation_hz.
struct FreqTemplate {
    double peak_deviation_hz = 0.01;
    double rise_tau_s = 0.1;
    double decay_tau_s = 0.3;

    void validate() const;
    /// Time after onset at which the excursion peaks.
    [[nodiscard]] double peak_time_s() const;
};

struct ScenarioConfig {
    NetworkModel network;
    BranchId outaged_branch = 0;
    double event_time_s = 10.0;
    double duration_s = 60.0;
    double reporting_rate_hz = 25.0;
    std::int64_t start_time_ms = 1'600'000'000'000;
    double nominal_frequency_hz = 60.0;
    double power_tau_s = 0.2;
    NoiseConfig noise;
    FreqTemplate freq_signature;

    void validate() const;
    [[nodiscard]] std::size_t sample_count() const;
};

/// Noise applied to one series.
struct SeriesNoise {
    double sigma = 0.0;
    double spike_probability = 0.0;
    double spike_amplitude = 0.0;
    std::uint64_t seed = 0;
};

/// Deviation (Hz) of the template at `t_since_event`; 0 for t < 0.
double frequency_template(const FreqTemplate& tpl, double t_since_event_s);

/// Adds i.i.d. Gaussian noise, then with `spike_probability` per sample
/// offsets the sample by +/- spike_amplitude. Reproducible for a fixed seed.
std::vector<double> inject_noise(std::span<const double> series, const SeriesNoise& noise);

/// Noise streams used by simulate_scenario for channel number `index`.
SeriesNoise frequency_noise(const NoiseConfig& noise, std::size_t index);
SeriesNoise power_noise(const NoiseConfig& noise, std::size_t index);

/// Power seen on a branch `t_since_event_s` after the trip: pre-outage flow
/// before the event, then a first-order move towards the post-outage flow
/// that lands exactly on it 5 tau after the event.
double power_transition(double pre_mw, double post_mw, double t_since_event_s, double tau_s);

PmuDataset simulate_scenario(const ScenarioConfig& cfg);

/// Scenario JSON mirrors ScenarioConfig field names. "network" is either an
/// inline network object or a path, resolved against `base_dir`.
ScenarioConfig scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_scenario(const std::filesystem::path& path);

}  // namespace sentinel
