#include "sentinel/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "sentinel/error.hpp"
#include "sentinel/io_util.hpp"

namespace sentinel {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t case_seed(std::uint64_t base, int case_id) {
    std::uint64_t x = base ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(case_id + 1));
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Case {
    int id;
    BranchId branch;
    int repeat;
};

EvaluationRow run_case(const NetworkModel& net, const BranchFlows& pre_flows, const EvaluationOptions& opt,
                       const Case& c) {
    const auto& br = net.branch(c.branch);
    EvaluationRow row;
    row.case_id = c.id;
    row.case_name = "outage_" + std::to_string(c.branch) + "_s" + std::to_string(c.repeat);
    row.outaged_branch = c.branch;
    row.voltage_class = br.voltage_class;
    row.monitored = br.monitored;
    row.seed = case_seed(opt.seed, c.id);
    row.pre_outage_flow_mw = pre_flows.at(c.branch);

    ScenarioConfig cfg;
    cfg.network = net;
    cfg.outaged_branch = c.branch;
    cfg.event_time_s = opt.event_time_s;
    cfg.duration_s = opt.duration_s;
    cfg.reporting_rate_hz = opt.reporting_rate_hz;
    cfg.noise = opt.noise;
    cfg.noise.rng_seed = row.seed;
    cfg.freq_signature = opt.freq_signature;
    const auto dataset = simulate_scenario(cfg);

    const auto events = detect(dataset, opt.detector);
    row.detected = !events.empty();
    if (!row.detected) {
        row.event_time_error_s = kNaN;
        row.error_miles = kNaN;
        row.baseline_error_miles = kNaN;
        return row;
    }
    const auto truth_ms = cfg.start_time_ms + static_cast<std::int64_t>(std::llround(cfg.event_time_s * 1000.0));
    // score the event nearest the true trip time
    const auto& event = *std::min_element(events.begin(), events.end(), [&](const auto& a, const auto& b) {
        return std::llabs(a.event_time_ms - truth_ms) < std::llabs(b.event_time_ms - truth_ms);
    });
    row.event_time_error_s = static_cast<double>(event.event_time_ms - truth_ms) / 1000.0;

    const auto located = locate(dataset, net, event, opt.locator);
    row.estimated_branch = located.estimated_branch;
    row.identified_correctly = located.estimated_branch == c.branch;
    row.low_confidence = located.low_confidence;
    row.error_miles = localization_error_miles(located, net, c.branch);

    const auto baseline = baseline_locate_freq(dataset, event, opt.locator);
    row.baseline_channel_branch = baseline.estimated_branch;
    row.baseline_error_miles = localization_error_miles(baseline, net, c.branch);
    return row;
}

}  // namespace

NetworkModel apply_coverage(const NetworkModel& net, double coverage, std::uint64_t seed) {
    if (!(coverage >= 0.0 && coverage <= 1.0)) throw Error(ErrorCode::InvalidConfig, "coverage must lie in [0, 1]");
    std::vector<Branch> branches = net.branches();
    std::vector<std::size_t> order(branches.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    const auto count = static_cast<std::size_t>(std::llround(coverage * static_cast<double>(branches.size())));
    for (std::size_t k = 0; k < order.size(); ++k) branches[order[k]].monitored = k < count;
    return build_network(net.buses(), std::move(branches), net.slack_bus(), net.mva_base());
}

EvaluationReport run_evaluation(const NetworkModel& input, const EvaluationOptions& opt) {
    const NetworkModel net = opt.coverage ? apply_coverage(input, *opt.coverage, opt.seed) : input;
    if (net.monitored_branch_ids().empty())
        throw Error(ErrorCode::NoMonitoredBranch, "coverage leaves no monitored branch");
    if (opt.seeds_per_outage < 1) throw Error(ErrorCode::InvalidConfig, "seeds per outage must be >= 1");

    std::vector<BranchId> outages;
    if (opt.outages) {
        outages = *opt.outages;
    } else {
        for (const auto id : net.in_service_branch_ids())
            if (!is_bridge(net, id)) outages.push_back(id);
    }
    std::vector<Case> cases;
    for (const auto b : outages)
        for (int s = 0; s < opt.seeds_per_outage; ++s) cases.push_back(Case{static_cast<int>(cases.size()), b, s});

    const auto pre_flows = dc_power_flow(net);
    EvaluationReport report;
    report.rows.resize(cases.size());

    unsigned workers = opt.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.workers;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(cases.size(), 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) {
            try {
                report.rows[i] = run_case(net, pre_flows, opt, cases[i]);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    report.groups = summarize(report.rows, true);
    report.by_monitoring = summarize(report.rows, false);
    return report;
}

std::vector<GroupSummary> summarize(const std::vector<EvaluationRow>& rows, bool split_by_voltage_class) {
    std::vector<GroupSummary> groups;
    auto group_for = [&](const EvaluationRow& r) -> GroupSummary& {
        const std::string label = split_by_voltage_class ? r.voltage_class : std::string("all");
        for (auto& g : groups)
            if (g.voltage_class == label && g.monitored == r.monitored) return g;
        groups.push_back(GroupSummary{label, r.monitored});
        return groups.back();
    };
    for (const auto& r : rows) {
        auto& g = group_for(r);
        ++g.cases;
        if (!r.detected) continue;
        ++g.detected;
        if (r.identified_correctly) ++g.identified;
        g.max_error_miles = std::max(g.max_error_miles, r.error_miles);
        g.average_error_miles += r.error_miles;
        g.max_baseline_error_miles = std::max(g.max_baseline_error_miles, r.baseline_error_miles);
        g.average_baseline_error_miles += r.baseline_error_miles;
    }
    for (auto& g : groups) {
        if (g.detected > 0) {
            g.average_error_miles /= g.detected;
            g.average_baseline_error_miles /= g.detected;
        }
    }
    std::sort(groups.begin(), groups.end(), [](const GroupSummary& a, const GroupSummary& b) {
        return a.voltage_class != b.voltage_class ? a.voltage_class < b.voltage_class : a.monitored > b.monitored;
    });
    return groups;
}

std::string evaluation_rows_to_csv(const std::vector<EvaluationRow>& rows) {
    std::string out =
        "case_id,case_name,outaged_branch,voltage_class,monitored,seed,pre_outage_flow_mw,detected,"
        "event_time_error_s,identified_correctly,estimated_branch,low_confidence,error_miles,"
        "baseline_branch,baseline_error_miles\n";
    auto num = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
    for (const auto& r : rows) {
        out += std::to_string(r.case_id) + ',' + r.case_name + ',' + std::to_string(r.outaged_branch) + ',' +
               r.voltage_class + ',' + (r.monitored ? "Y" : "N") + ',' + std::to_string(r.seed) + ',' +
               num(r.pre_outage_flow_mw) + ',' + (r.detected ? "1" : "0") + ',' + num(r.event_time_error_s) + ',' +
               (r.identified_correctly ? "1" : "0") + ',' + std::to_string(r.estimated_branch) + ',' +
               (r.low_confidence ? "1" : "0") + ',' + num(r.error_miles) + ',' +
               std::to_string(r.baseline_channel_branch) + ',' + num(r.baseline_error_miles) + '\n';
    }
    return out;
}

nlohmann::json evaluation_summary_to_json(const EvaluationReport& report) {
    auto to_json = [](const std::vector<GroupSummary>& groups) {
        auto arr = nlohmann::json::array();
        for (const auto& g : groups)
            arr.push_back({{"voltage_class", g.voltage_class},
                           {"monitored", g.monitored},
                           {"cases", g.cases},
                           {"detected", g.detected},
                           {"identified", g.identified},
                           {"max_error_miles", g.max_error_miles},
                           {"average_error_miles", g.average_error_miles},
                           {"max_baseline_error_miles", g.max_baseline_error_miles},
                           {"average_baseline_error_miles", g.average_baseline_error_miles}});
        return arr;
    };
    return {{"cases", report.rows.size()}, {"groups", to_json(report.groups)}, {"by_monitoring", to_json(report.by_monitoring)}};
}

}  // namespace sentinel
