#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace sentinel {

using BusId = int;
using BranchId = int;

struct Bus {
    BusId id = 0;
    double lat = 0.0;
    double lon = 0.0;
    double injection_mw = 0.0;  // generation minus load
};

struct Branch {
    BranchId id = 0;
    BusId from_bus = 0;
    BusId to_bus = 0;
    double reactance_pu = 0.0;
    bool in_service = true;
    bool monitored = true;
    std::string voltage_class;  // free-text label, used only for report grouping
};

/// Signed MW flow per in-service branch, positive in the from -> to direction.
using BranchFlows = std::map<BranchId, double>;

struct Transaction {
    BusId from_bus = 0;
    BusId to_bus = 0;
    double amount_mw = 1.0;
};

enum class FactorKind { Ptdf, Lodf };

struct DistributionFactors {
    FactorKind kind = FactorKind::Ptdf;
    std::optional<Transaction> transaction;  // set for PTDF
    std::optional<BranchId> outaged_branch;  // set for LODF
    std::map<BranchId, double> values;
};

/// Validated lossless DC network. Instances are only produced by
/// build_network / apply_outage, so every NetworkModel satisfies:
/// unique ids, positive reactances, known endpoints, connected in-service
/// graph, and injections summing to zero.
class NetworkModel {
public:
    [[nodiscard]] const std::vector<Bus>& buses() const noexcept { return buses_; }
    [[nodiscard]] const std::vector<Branch>& branches() const noexcept { return branches_; }
    [[nodiscard]] BusId slack_bus() const noexcept { return slack_bus_; }
    [[nodiscard]] double mva_base() const noexcept { return mva_base_; }

    [[nodiscard]] const Bus& bus(BusId id) const;
    [[nodiscard]] const Branch& branch(BranchId id) const;
    [[nodiscard]] bool has_bus(BusId id) const noexcept { return bus_index_.contains(id); }
    [[nodiscard]] bool has_branch(BranchId id) const noexcept { return branch_index_.contains(id); }
    [[nodiscard]] std::size_t bus_index(BusId id) const;
    [[nodiscard]] std::size_t branch_index(BranchId id) const;

    [[nodiscard]] std::vector<BranchId> in_service_branch_ids() const;
    [[nodiscard]] std::vector<BranchId> monitored_branch_ids() const;

private:
    friend NetworkModel build_network(std::vector<Bus>, std::vector<Branch>, BusId, double);
    friend NetworkModel apply_outage(const NetworkModel&, BranchId);

    std::vector<Bus> buses_;
    std::vector<Branch> branches_;
    BusId slack_bus_ = 0;
    double mva_base_ = 100.0;
    std::unordered_map<BusId, std::size_t> bus_index_;
    std::unordered_map<BranchId, std::size_t> branch_index_;
};

inline constexpr double kDefaultMvaBase = 100.0;
/// Largest |sum of injections| that build_network will silently move onto the slack.
inline constexpr double kBalanceTolerance = 1e-6;
/// |1 - phi_m| below this means the outaged line is a bridge.
inline constexpr double kIslandingTolerance = 1e-9;

NetworkModel build_network(std::vector<Bus> buses, std::vector<Branch> branches, BusId slack_bus,
                           double mva_base = kDefaultMvaBase);

/// True when the in-service branches connect every bus.
bool is_connected(const NetworkModel& net);
/// True when taking `branch` out of service would split the in-service graph.
bool is_bridge(const NetworkModel& net, BranchId branch);

/// Factored reduced susceptance matrix (slack row/column removed) of one
/// network. Immutable after construction; solve() is safe to call from
/// several threads at once.
class DcSolver {
public:
    explicit DcSolver(const NetworkModel& net);
    ~DcSolver();
    DcSolver(DcSolver&&) noexcept;
    DcSolver& operator=(DcSolver&&) noexcept;
    DcSolver(const DcSolver&) = delete;
    DcSolver& operator=(const DcSolver&) = delete;

    /// Flows for the given per-bus injections (MW, indexed like net.buses()).
    /// The slack entry is ignored; the slack absorbs the imbalance.
    [[nodiscard]] BranchFlows flows(const std::vector<double>& injections_mw) const;
    /// Flows produced by moving `amount_mw` from one bus to another.
    [[nodiscard]] BranchFlows transfer_flows(BusId from, BusId to, double amount_mw) const;

    [[nodiscard]] const NetworkModel& network() const noexcept { return net_; }

private:
    struct Impl;
    NetworkModel net_;
    std::unique_ptr<Impl> impl_;
};

BranchFlows dc_power_flow(const NetworkModel& net);

DistributionFactors ptdf(const NetworkModel& net, const Transaction& transaction);
DistributionFactors ptdf(const DcSolver& solver, const Transaction& transaction);

DistributionFactors lodf(const NetworkModel& net, BranchId outaged);
DistributionFactors lodf(const DcSolver& solver, BranchId outaged);

/// Flow change per branch caused by tripping `outaged`: zeta_k * P_m for the
/// remaining branches and -P_m for the outaged one.
std::map<BranchId, double> predicted_flow_change(const NetworkModel& net, BranchId outaged);
std::map<BranchId, double> predicted_flow_change(const DcSolver& solver, const BranchFlows& pre_flows,
                                                 BranchId outaged);

/// Signed sum of the given flows leaving `bus` (outgoing positive). Branches
/// missing from `flows` contribute nothing.
double net_outflow(const NetworkModel& net, const BranchFlows& flows, BusId bus);
/// |injection - net outflow| at `bus`; every in-service branch must be present in `flows`.
double kcl_residual(const NetworkModel& net, const BranchFlows& flows, BusId bus);

NetworkModel apply_outage(const NetworkModel& net, BranchId branch);

}  // namespace sentinel
