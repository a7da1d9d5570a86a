#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sentinel/grid_model.hpp"
#include "sentinel/outage_detector.hpp"
#include "sentinel/outage_locator.hpp"
#include "sentinel/scenario_sim.hpp"

namespace sentinel {

struct EvaluationOptions {
    /// Fraction of branches carrying a PMU; unset keeps the network's own flags.
    std::optional<double> coverage;
    int seeds_per_outage = 1;
    std::uint64_t seed = 1;
    NoiseConfig noise;  // rng_seed is replaced per case
    FreqTemplate freq_signature;
    double event_time_s = 10.0;
    double duration_s = 30.0;
    double reporting_rate_hz = 25.0;
    DetectorParams detector;
    LocatorParams locator;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned workers = 1;
    /// Outages to run; unset means every non-islanding in-service branch.
    std::optional<std::vector<BranchId>> outages;
};

struct EvaluationRow {
    int case_id = 0;
    std::string case_name;
    BranchId outaged_branch = 0;
    std::string voltage_class;
    bool monitored = false;
    std::uint64_t seed = 0;
    double pre_outage_flow_mw = 0.0;
    bool detected = false;
    double event_time_error_s = 0.0;  // NaN when not detected
    bool identified_correctly = false;
    BranchId estimated_branch = 0;
    bool low_confidence = false;
    double error_miles = 0.0;           // power-change method; NaN when not detected
    BranchId baseline_channel_branch = 0;
    double baseline_error_miles = 0.0;  // max-frequency baseline; NaN when not detected
};

struct GroupSummary {
    std::string voltage_class;
    bool monitored = false;
    int cases = 0;
    int detected = 0;
    int identified = 0;
    double max_error_miles = 0.0;
    double average_error_miles = 0.0;
    double max_baseline_error_miles = 0.0;
    double average_baseline_error_miles = 0.0;
};

struct EvaluationReport {
    std::vector<EvaluationRow> rows;  // ordered by case_id
    std::vector<GroupSummary> groups;  // by voltage class, then monitored first
    std::vector<GroupSummary> by_monitoring;  // all classes merged: monitored, unmonitored
};

/// Marks round(coverage * branch count) branches as monitored, chosen by a
/// seeded shuffle; the rest are unmonitored.
NetworkModel apply_coverage(const NetworkModel& net, double coverage, std::uint64_t seed);

/// Every non-islanding single outage x seeds_per_outage: simulate, detect,
/// locate with both methods, score against the tripped branch.
EvaluationReport run_evaluation(const NetworkModel& net, const EvaluationOptions& options);

std::vector<GroupSummary> summarize(const std::vector<EvaluationRow>& rows, bool split_by_voltage_class);

std::string evaluation_rows_to_csv(const std::vector<EvaluationRow>& rows);
nlohmann::json evaluation_summary_to_json(const EvaluationReport& report);

}  // namespace sentinel
