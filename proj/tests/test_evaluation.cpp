#include <cmath>

#include "doctest.h"
#include "sentinel/error.hpp"
#include "sentinel/evaluation.hpp"
#include "sentinel/synthetic_networks.hpp"

using namespace sentinel;

TEST_CASE("coverage marks a seeded subset as monitored") {
    const auto net = ne39_network();
    const auto half = apply_coverage(net, 0.5, 4);
    CHECK(half.monitored_branch_ids().size() == 23);
    CHECK(apply_coverage(net, 0.5, 4).monitored_branch_ids() == half.monitored_branch_ids());
    CHECK(apply_coverage(net, 0.5, 5).monitored_branch_ids() != half.monitored_branch_ids());
    CHECK(apply_coverage(net, 1.0, 4).monitored_branch_ids().size() == 46);
    CHECK_THROWS_AS(apply_coverage(net, 1.5, 4), Error);
}

TEST_CASE("no coverage is an error") {
    EvaluationOptions opt;
    opt.coverage = 0.0;
    try {
        run_evaluation(k4_network(), opt);
        FAIL("expected NoMonitoredBranch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoMonitoredBranch);
    }
}

TEST_CASE("full coverage on the 39-bus fixture identifies every trip") {
    EvaluationOptions opt;
    opt.coverage = 1.0;
    const auto report = run_evaluation(ne39_network(), opt);
    CHECK(report.rows.size() == 21);  // the non-bridge lines
    for (const auto& row : report.rows) {
        CAPTURE(row.case_name);
        CHECK(row.monitored);
        CHECK(row.detected);
        CHECK(std::abs(row.event_time_error_s) <= 0.5);
        CHECK(row.identified_correctly);
        CHECK(row.error_miles == 0.0);
    }
    REQUIRE(report.by_monitoring.size() == 1);
    CHECK(report.by_monitoring[0].identified == 21);
    CHECK(report.by_monitoring[0].max_error_miles == 0.0);
}

TEST_CASE("half coverage: unmonitored trips land farther away") {
    EvaluationOptions opt;
    opt.coverage = 0.5;
    opt.seed = 3;
    const auto report = run_evaluation(ne39_network(), opt);
    const GroupSummary* monitored = nullptr;
    const GroupSummary* unmonitored = nullptr;
    for (const auto& g : report.by_monitoring) (g.monitored ? monitored : unmonitored) = &g;
    REQUIRE(monitored != nullptr);
    REQUIRE(unmonitored != nullptr);
    CHECK(monitored->average_error_miles == 0.0);
    CHECK(unmonitored->average_error_miles > monitored->average_error_miles);
    for (const auto& row : report.rows)
        if (row.monitored && row.identified_correctly) CHECK(row.error_miles == 0.0);
}

TEST_CASE("rows come out in case order whatever the worker count") {
    EvaluationOptions opt;
    opt.seeds_per_outage = 2;
    opt.workers = 1;
    const auto serial = run_evaluation(ring8_network(), opt);
    opt.workers = 3;
    const auto pooled = run_evaluation(ring8_network(), opt);
    CHECK(evaluation_rows_to_csv(serial.rows) == evaluation_rows_to_csv(pooled.rows));
    CHECK(evaluation_summary_to_json(serial) == evaluation_summary_to_json(pooled));
    for (std::size_t i = 0; i < serial.rows.size(); ++i) CHECK(serial.rows[i].case_id == static_cast<int>(i));
    CHECK(serial.rows.size() == 16);
}

TEST_CASE("summary groups by voltage class and monitoring") {
    std::vector<EvaluationRow> rows(4);
    rows[0] = {.voltage_class = "345 kV", .monitored = true, .detected = true, .error_miles = 0.0};
    rows[1] = {.voltage_class = "345 kV", .monitored = false, .detected = true, .error_miles = 10.0};
    rows[2] = {.voltage_class = "345 kV", .monitored = false, .detected = true, .error_miles = 20.0};
    rows[3] = {.voltage_class = "230 kV", .monitored = false, .detected = false};
    const auto groups = summarize(rows, true);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0].voltage_class == "230 kV");
    CHECK(groups[0].detected == 0);
    CHECK(groups[1].monitored);
    CHECK(groups[2].average_error_miles == 15.0);
    CHECK(groups[2].max_error_miles == 20.0);
    const auto merged = summarize(rows, false);
    REQUIRE(merged.size() == 2);
    CHECK(merged[1].cases == 3);
}
