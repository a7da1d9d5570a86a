#include "sentinel/scenario_sim.hpp"

#include <cmath>
#include <random>

#include "sentinel/error.hpp"
#include "sentinel/io_util.hpp"
#include "sentinel/network_io.hpp"

namespace sentinel {

namespace {

// splitmix64 finalizer; decorrelates per-channel seeds derived from one base seed.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::size_t index, std::uint64_t stream) {
    return mix(mix(base) ^ mix(static_cast<std::uint64_t>(index) * 2 + stream));
}

template <typename T>
T field(const nlohmann::json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::SchemaError, std::string("scenario field '") + key + "' has the wrong type");
    }
}

}  // namespace

void NoiseConfig::validate() const {
    if (!(gaussian_sigma_hz >= 0.0) || !(gaussian_sigma_mw >= 0.0))
        throw Error(ErrorCode::InvalidConfig, "noise sigmas must be >= 0");
    if (!(spike_probability >= 0.0 && spike_probability < 1.0))
        throw Error(ErrorCode::InvalidConfig, "spike_probability must lie in [0, 1)");
    if (!std::isfinite(spike_amplitude_hz)) throw Error(ErrorCode::InvalidConfig, "spike_amplitude_hz must be finite");
}

void FreqTemplate::validate() const {
    if (!(rise_tau_s > 0.0)) throw Error(ErrorCode::InvalidConfig, "rise_tau_s must be > 0");
    if (!(decay_tau_s > rise_tau_s)) throw Error(ErrorCode::InvalidConfig, "decay_tau_s must exceed rise_tau_s");
    if (!std::isfinite(peak_deviation_hz)) throw Error(ErrorCode::InvalidConfig, "peak_deviation_hz must be finite");
}

double FreqTemplate::peak_time_s() const {
    return std::log(decay_tau_s / rise_tau_s) * decay_tau_s * rise_tau_s / (decay_tau_s - rise_tau_s);
}

void ScenarioConfig::validate() const {
    if (!(reporting_rate_hz > 0.0) || reporting_rate_hz > 1000.0)
        throw Error(ErrorCode::InvalidConfig, "reporting_rate must lie in (0, 1000] Hz");
    if (!(event_time_s > 0.0 && event_time_s < duration_s))
        throw Error(ErrorCode::InvalidConfig, "event_time must satisfy 0 < event_time < duration");
    if (!(power_tau_s > 0.0)) throw Error(ErrorCode::InvalidConfig, "power_tau_s must be > 0");
    if (!std::isfinite(nominal_frequency_hz)) throw Error(ErrorCode::InvalidConfig, "nominal frequency must be finite");
    noise.validate();
    freq_signature.validate();
}

std::size_t ScenarioConfig::sample_count() const {
    return static_cast<std::size_t>(std::llround(duration_s * reporting_rate_hz));
}

double frequency_template(const FreqTemplate& tpl, double t_since_event_s) {
    if (t_since_event_s < 0.0 || tpl.peak_deviation_hz == 0.0) return 0.0;
    auto shape = [&](double t) { return std::exp(-t / tpl.decay_tau_s) - std::exp(-t / tpl.rise_tau_s); };
    return tpl.peak_deviation_hz * shape(t_since_event_s) / shape(tpl.peak_time_s());
}

std::vector<double> inject_noise(std::span<const double> series, const SeriesNoise& noise) {
    std::vector<double> out(series.begin(), series.end());
    if (noise.sigma <= 0.0 && noise.spike_probability <= 0.0) return out;
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, noise.sigma > 0.0 ? noise.sigma : 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& v : out) {
        if (noise.sigma > 0.0) v += gauss(rng);
        if (noise.spike_probability > 0.0 && unit(rng) < noise.spike_probability)
            v += unit(rng) < 0.5 ? -noise.spike_amplitude : noise.spike_amplitude;
    }
    return out;
}

SeriesNoise frequency_noise(const NoiseConfig& noise, std::size_t index) {
    return {noise.gaussian_sigma_hz, noise.spike_probability, noise.spike_amplitude_hz,
            derive_seed(noise.rng_seed, index, 0)};
}

SeriesNoise power_noise(const NoiseConfig& noise, std::size_t index) {
    return {noise.gaussian_sigma_mw, 0.0, 0.0, derive_seed(noise.rng_seed, index, 1)};
}

double power_transition(double pre_mw, double post_mw, double t_since_event_s, double tau_s) {
    if (t_since_event_s < 0.0) return pre_mw;
    if (t_since_event_s >= 5.0 * tau_s) return post_mw;
    return post_mw + (pre_mw - post_mw) * std::exp(-t_since_event_s / tau_s);
}

PmuDataset simulate_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const auto& net = cfg.network;
    const auto monitored = net.monitored_branch_ids();
    if (monitored.empty()) throw Error(ErrorCode::NoMonitoredBranch, "no in-service monitored branch");

    const auto pre_flows = dc_power_flow(net);
    const auto post_net = apply_outage(net, cfg.outaged_branch);
    auto post_flows = dc_power_flow(post_net);
    post_flows[cfg.outaged_branch] = 0.0;

    const std::size_t n = cfg.sample_count();
    PmuDataset ds;
    ds.reporting_rate_hz = cfg.reporting_rate_hz;
    ds.timestamps_ms.resize(n);
    std::vector<double> t_since(n);
    std::vector<double> clean_freq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / cfg.reporting_rate_hz;
        ds.timestamps_ms[i] = cfg.start_time_ms + std::llround(static_cast<double>(i) * 1000.0 / cfg.reporting_rate_hz);
        t_since[i] = t - cfg.event_time_s;
        clean_freq[i] = cfg.nominal_frequency_hz + frequency_template(cfg.freq_signature, t_since[i]);
    }
    if (n < 2 || ds.timestamps_ms[1] == ds.timestamps_ms[0])
        throw Error(ErrorCode::InvalidConfig, "scenario produces fewer than two distinct samples");

    for (std::size_t c = 0; c < monitored.size(); ++c) {
        const auto& br = net.branch(monitored[c]);
        const auto& terminal = net.bus(br.from_bus);
        PmuChannel ch;
        ch.channel_id = br.id;
        ch.branch_id = br.id;
        ch.terminal_bus = terminal.id;
        ch.lat = terminal.lat;
        ch.lon = terminal.lon;

        std::vector<double> power(n);
        const double pre = pre_flows.at(br.id);
        const double post = post_flows.at(br.id);
        for (std::size_t i = 0; i < n; ++i) power[i] = power_transition(pre, post, t_since[i], cfg.power_tau_s);

        ch.frequency_hz = inject_noise(clean_freq, frequency_noise(cfg.noise, c));
        ch.active_power_mw = inject_noise(power, power_noise(cfg.noise, c));
        ds.channels.push_back(std::move(ch));
    }
    return ds;
}

ScenarioConfig scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "scenario: expected an object");
    if (!doc.contains("network")) throw Error(ErrorCode::SchemaError, "scenario: missing field 'network'");
    if (!doc.contains("outaged_branch")) throw Error(ErrorCode::SchemaError, "scenario: missing field 'outaged_branch'");

    ScenarioConfig cfg;
    const auto& network = doc["network"];
    if (network.is_string()) {
        std::filesystem::path p = network.get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        cfg.network = load_network(p);
    } else {
        cfg.network = network_from_json(network);
    }
    cfg.outaged_branch = field<int>(doc, "outaged_branch", 0);
    cfg.event_time_s = field<double>(doc, "event_time", cfg.event_time_s);
    cfg.duration_s = field<double>(doc, "duration", cfg.duration_s);
    cfg.reporting_rate_hz = field<double>(doc, "reporting_rate", cfg.reporting_rate_hz);
    cfg.start_time_ms = field<std::int64_t>(doc, "start_time_ms", cfg.start_time_ms);
    cfg.nominal_frequency_hz = field<double>(doc, "nominal_frequency_hz", cfg.nominal_frequency_hz);
    cfg.power_tau_s = field<double>(doc, "power_tau_s", cfg.power_tau_s);
    if (doc.contains("noise")) {
        const auto& nj = doc["noise"];
        if (!nj.is_object()) throw Error(ErrorCode::SchemaError, "scenario: 'noise' must be an object");
        auto& nc = cfg.noise;
        nc.gaussian_sigma_hz = field<double>(nj, "gaussian_sigma_hz", nc.gaussian_sigma_hz);
        nc.gaussian_sigma_mw = field<double>(nj, "gaussian_sigma_mw", nc.gaussian_sigma_mw);
        nc.spike_probability = field<double>(nj, "spike_probability", nc.spike_probability);
        nc.spike_amplitude_hz = field<double>(nj, "spike_amplitude_hz", nc.spike_amplitude_hz);
        nc.rng_seed = field<std::uint64_t>(nj, "rng_seed", nc.rng_seed);
    }
    if (doc.contains("freq_signature")) {
        const auto& fj = doc["freq_signature"];
        if (!fj.is_object()) throw Error(ErrorCode::SchemaError, "scenario: 'freq_signature' must be an object");
        auto& ft = cfg.freq_signature;
        ft.peak_deviation_hz = field<double>(fj, "peak_deviation_hz", ft.peak_deviation_hz);
        ft.rise_tau_s = field<double>(fj, "rise_tau_s", ft.rise_tau_s);
        ft.decay_tau_s = field<double>(fj, "decay_tau_s", ft.decay_tau_s);
    }
    cfg.validate();
    if (!cfg.network.has_branch(cfg.outaged_branch))
        throw Error(ErrorCode::UnknownBranch, "outaged_branch " + std::to_string(cfg.outaged_branch));
    return cfg;
}

nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
    return {{"network", network_to_json(cfg.network)},
            {"outaged_branch", cfg.outaged_branch},
            {"event_time", cfg.event_time_s},
            {"duration", cfg.duration_s},
            {"reporting_rate", cfg.reporting_rate_hz},
            {"start_time_ms", cfg.start_time_ms},
            {"nominal_frequency_hz", cfg.nominal_frequency_hz},
            {"power_tau_s", cfg.power_tau_s},
            {"noise",
             {{"gaussian_sigma_hz", cfg.noise.gaussian_sigma_hz},
              {"gaussian_sigma_mw", cfg.noise.gaussian_sigma_mw},
              {"spike_probability", cfg.noise.spike_probability},
              {"spike_amplitude_hz", cfg.noise.spike_amplitude_hz},
              {"rng_seed", cfg.noise.rng_seed}}},
            {"freq_signature",
             {{"peak_deviation_hz", cfg.freq_signature.peak_deviation_hz},
              {"rise_tau_s", cfg.freq_signature.rise_tau_s},
              {"decay_tau_s", cfg.freq_signature.decay_tau_s}}}};
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    return scenario_from_json(read_json_file(path), path.parent_path());
}

}  // namespace sentinel
