#include "sentinel/commands.hpp"

#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "sentinel/dataset_io.hpp"
#include "sentinel/error.hpp"
#include "sentinel/evaluation.hpp"
#include "sentinel/io_util.hpp"
#include "sentinel/network_io.hpp"
#include "sentinel/outage_detector.hpp"
#include "sentinel/outage_locator.hpp"
#include "sentinel/reports.hpp"
#include "sentinel/scenario_sim.hpp"

namespace sentinel {

namespace {

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty() || out_path == "-") {
        out << text;
    } else {
        write_text_file(out_path, text);
    }
}

void add_detector_flags(CLI::App& cmd, DetectorParams& p, std::string& second_peak, std::string& confirmation) {
    cmd.add_option("--median-window", p.filter.median_window, "Median filter window (samples, odd)")->capture_default_str();
    cmd.add_option("--mean-window", p.filter.mean_window, "Mean filter window (samples, odd)")->capture_default_str();
    cmd.add_option("--detection-window", p.detection_window, "Detection window (samples)")->capture_default_str();
    cmd.add_option("--first-threshold", p.first_threshold_hz, "First peak threshold (Hz)")->capture_default_str();
    cmd.add_option("--second-threshold", p.second_threshold_hz, "Second peak threshold (Hz)")->capture_default_str();
    cmd.add_option("--cluster-window", p.cluster_window_s, "Cross-channel cluster window (s)")->capture_default_str();
    cmd.add_option("--min-channels", p.min_channels, "Channels required per event")->capture_default_str();
    cmd.add_option("--second-peak", second_peak, "Second-peak rule")
        ->check(CLI::IsMember({"opposite", "same"}))
        ->capture_default_str();
    cmd.add_option("--confirm", confirmation, "Where the second peak may occur")
        ->check(CLI::IsMember({"symmetric", "forward"}))
        ->capture_default_str();
}

void apply_detector_strings(DetectorParams& p, const std::string& second_peak, const std::string& confirmation) {
    p.second_peak = second_peak == "same" ? SecondPeakRule::SameSign : SecondPeakRule::OppositeSign;
    p.confirmation = confirmation == "forward" ? ConfirmationSpan::Forward : ConfirmationSpan::Symmetric;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Line outage detection and localization from PMU frequency and power streams"};
    app.name("outage-sentinel");
    app.require_subcommand(1);

    // simulate
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic PMU dataset CSV from a scenario JSON");
    simulate->add_option("--config", config_path, "Scenario JSON")->required();
    simulate->add_option("--out", out_path, "Output CSV (default: stdout)");
    simulate->add_option("--seed", seed, "Override the scenario's noise seed");

    // detect
    std::string csv_path;
    DetectorParams detector;
    std::string second_peak = "opposite";
    std::string confirmation = "symmetric";
    auto* detect_cmd = app.add_subcommand("detect", "Detect outage events in a dataset CSV; prints events JSON");
    detect_cmd->add_option("csv", csv_path, "Dataset CSV")->required();
    detect_cmd->add_option("--out", out_path, "Output JSON (default: stdout)");
    add_detector_flags(*detect_cmd, detector, second_peak, confirmation);

    // locate
    std::string network_path;
    std::string events_path;
    std::string method = "both";
    std::optional<BranchId> actual_branch;
    LocatorParams locator;
    auto* locate_cmd = app.add_subcommand("locate", "Localize detected events; prints localization JSON");
    locate_cmd->add_option("csv", csv_path, "Dataset CSV")->required();
    locate_cmd->add_option("--network", network_path, "Network JSON")->required();
    locate_cmd->add_option("--events", events_path, "Events JSON from `detect`")->required();
    locate_cmd->add_option("--method", method, "Localization method")
        ->transform(CLI::IsMember(std::map<std::string, std::string>{{"both", "both"},
                                                                    {"power", "power"},
                                                                    {"power_change", "power"},
                                                                    {"baseline", "baseline"},
                                                                    {"max_freq_baseline", "baseline"}}))
        ->capture_default_str();
    locate_cmd->add_option("--actual-branch", actual_branch, "Tripped branch, to report error_miles");
    locate_cmd->add_option("--pre-length", locator.windows.pre_length)->capture_default_str();
    locate_cmd->add_option("--pre-gap", locator.windows.pre_gap)->capture_default_str();
    locate_cmd->add_option("--post-gap", locator.windows.post_gap)->capture_default_str();
    locate_cmd->add_option("--post-length", locator.windows.post_length)->capture_default_str();
    locate_cmd->add_option("--out", out_path, "Output JSON (default: stdout)");

    // factors
    std::optional<BranchId> outage;
    std::vector<BusId> transaction;
    double amount = 1.0;
    auto* factors = app.add_subcommand("factors", "Print a PTDF or LODF table as CSV");
    factors->add_option("--network", network_path, "Network JSON")->required();
    auto* outage_opt = factors->add_option("--outage", outage, "Outaged branch id (LODF)");
    auto* txn_opt = factors->add_option("--transaction", transaction, "From and to bus ids (PTDF)")->expected(2);
    outage_opt->excludes(txn_opt);
    factors->add_option("--amount", amount, "Transaction size in MW")->capture_default_str();
    factors->add_option("--out", out_path, "Output CSV (default: stdout)");

    // evaluate
    EvaluationOptions eval;
    std::optional<double> coverage;
    std::string summary_path;
    auto* evaluate = app.add_subcommand("evaluate", "Run every non-islanding single outage and score both methods");
    evaluate->add_option("--network", network_path, "Network JSON")->required();
    evaluate->add_option("--coverage", coverage, "Fraction of branches with a PMU (default: network flags)")
        ->check(CLI::Range(0.0, 1.0));
    evaluate->add_option("--seeds", eval.seeds_per_outage, "Scenarios per outage")->capture_default_str();
    evaluate->add_option("--seed", eval.seed, "Base seed for coverage and noise")->capture_default_str();
    evaluate->add_option("--sigma-hz", eval.noise.gaussian_sigma_hz)->capture_default_str();
    evaluate->add_option("--sigma-mw", eval.noise.gaussian_sigma_mw)->capture_default_str();
    evaluate->add_option("--spike-probability", eval.noise.spike_probability)->capture_default_str();
    evaluate->add_option("--spike-amplitude", eval.noise.spike_amplitude_hz)->capture_default_str();
    evaluate->add_option("--peak-hz", eval.freq_signature.peak_deviation_hz)->capture_default_str();
    evaluate->add_option("--duration", eval.duration_s)->capture_default_str();
    evaluate->add_option("--event-time", eval.event_time_s)->capture_default_str();
    evaluate->add_option("--workers", eval.workers, "Worker threads (0 = all cores)")->capture_default_str();
    evaluate->add_option("--out", out_path, "Per-case rows CSV");
    evaluate->add_option("--summary", summary_path, "Summary JSON (default: stdout)");
    add_detector_flags(*evaluate, eval.detector, second_peak, confirmation);

    // export-map
    std::string localization_path;
    std::string map_method = "power_change";
    auto* export_map = app.add_subcommand("export-map", "Export a localization as GeoJSON");
    export_map->add_option("--localization", localization_path, "Localization JSON from `locate`")->required();
    export_map->add_option("--network", network_path, "Network JSON")->required();
    export_map->add_option("--method", map_method, "Which report to export when the file holds several")
        ->check(CLI::IsMember({"power_change", "max_freq_baseline"}))
        ->capture_default_str();
    export_map->add_option("--out", out_path, "Output GeoJSON (default: stdout)");

    std::vector<std::string> argv_storage{"outage-sentinel"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (simulate->parsed()) {
            auto cfg = load_scenario(config_path);
            if (seed) cfg.noise.rng_seed = *seed;
            emit(dataset_to_csv(simulate_scenario(cfg)), out_path, out);
        } else if (detect_cmd->parsed()) {
            apply_detector_strings(detector, second_peak, confirmation);
            const auto dataset = load_dataset_csv(csv_path);
            emit(events_to_json(detect(dataset, detector), detector).dump(2) + "\n", out_path, out);
        } else if (locate_cmd->parsed()) {
            const auto net = load_network(network_path);
            auto dataset = load_dataset_csv(csv_path);
            attach_locations(dataset, net);
            const auto events = events_from_json(read_json_file(events_path));
            auto reports = nlohmann::json::array();
            for (const auto& ev : events) {
                std::vector<LocalizationResult> results;
                if (method != "baseline") results.push_back(locate(dataset, net, ev, locator));
                if (method != "power") results.push_back(baseline_locate_freq(dataset, ev, locator));
                for (auto& r : results) {
                    if (actual_branch) r.error_miles = localization_error_miles(r, net, *actual_branch);
                    reports.push_back(localization_to_json(r));
                }
            }
            emit(reports.dump(2) + "\n", out_path, out);
        } else if (factors->parsed()) {
            const auto net = load_network(network_path);
            DistributionFactors table;
            if (outage) {
                table = lodf(net, *outage);
            } else if (transaction.size() == 2) {
                table = ptdf(net, Transaction{transaction[0], transaction[1], amount});
            } else {
                err << "factors: give --outage BRANCH or --transaction FROM TO\n";
                return 2;
            }
            emit(factors_to_csv(table, net), out_path, out);
        } else if (evaluate->parsed()) {
            apply_detector_strings(eval.detector, second_peak, confirmation);
            eval.coverage = coverage;
            const auto report = run_evaluation(load_network(network_path), eval);
            if (!out_path.empty()) write_text_file(out_path, evaluation_rows_to_csv(report.rows));
            emit(evaluation_summary_to_json(report).dump(2) + "\n", summary_path, out);
        } else if (export_map->parsed()) {
            const auto net = load_network(network_path);
            const auto doc = read_json_file(localization_path);
            std::optional<LocalizationResult> chosen;
            if (doc.is_array()) {
                for (const auto& item : doc) {
                    auto r = localization_from_json(item);
                    if (to_string(r.method) == map_method) {
                        chosen = std::move(r);
                        break;
                    }
                }
                if (!chosen && !doc.empty())
                    throw Error(ErrorCode::SchemaError, "no '" + map_method + "' report in " + localization_path);
            } else {
                chosen = localization_from_json(doc);
            }
            const auto geo = chosen ? localization_to_geojson(*chosen, net)
                                    : nlohmann::json{{"type", "FeatureCollection"}, {"features", nlohmann::json::array()}};
            emit(geo.dump(2) + "\n", out_path, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    }
    return 0;
}

}  // namespace sentinel
