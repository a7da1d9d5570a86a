#include "sentinel/grid_model.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "sentinel/error.hpp"

namespace sentinel {

namespace {

std::string bus_label(BusId id) { return "bus " + std::to_string(id); }
std::string branch_label(BranchId id) { return "branch " + std::to_string(id); }

// Union-find over bus indices; counts components of the in-service graph,
// optionally pretending one branch is out of service.
std::size_t count_components(const NetworkModel& net, std::optional<std::size_t> skip_branch) {
    std::vector<std::size_t> parent(net.buses().size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    std::size_t components = parent.size();
    const auto& branches = net.branches();
    for (std::size_t k = 0; k < branches.size(); ++k) {
        if (!branches[k].in_service || (skip_branch && *skip_branch == k)) continue;
        const auto a = find(net.bus_index(branches[k].from_bus));
        const auto b = find(net.bus_index(branches[k].to_bus));
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components;
}

}  // namespace

const Bus& NetworkModel::bus(BusId id) const { return buses_[bus_index(id)]; }

const Branch& NetworkModel::branch(BranchId id) const { return branches_[branch_index(id)]; }

std::size_t NetworkModel::bus_index(BusId id) const {
    const auto it = bus_index_.find(id);
    if (it == bus_index_.end()) throw Error(ErrorCode::UnknownBus, bus_label(id));
    return it->second;
}

std::size_t NetworkModel::branch_index(BranchId id) const {
    const auto it = branch_index_.find(id);
    if (it == branch_index_.end()) throw Error(ErrorCode::UnknownBranch, branch_label(id));
    return it->second;
}

std::vector<BranchId> NetworkModel::in_service_branch_ids() const {
    std::vector<BranchId> ids;
    for (const auto& br : branches_)
        if (br.in_service) ids.push_back(br.id);
    return ids;
}

std::vector<BranchId> NetworkModel::monitored_branch_ids() const {
    std::vector<BranchId> ids;
    for (const auto& br : branches_)
        if (br.in_service && br.monitored) ids.push_back(br.id);
    return ids;
}

NetworkModel build_network(std::vector<Bus> buses, std::vector<Branch> branches, BusId slack_bus,
                           double mva_base) {
    if (buses.empty()) throw Error(ErrorCode::InvalidNetwork, "network has no buses");
    if (branches.empty()) throw Error(ErrorCode::InvalidNetwork, "network has no branches");
    if (!(mva_base > 0.0) || !std::isfinite(mva_base))
        throw Error(ErrorCode::InvalidNetwork, "mva_base must be positive");

    NetworkModel net;
    for (std::size_t i = 0; i < buses.size(); ++i) {
        const auto& b = buses[i];
        if (!net.bus_index_.emplace(b.id, i).second) throw Error(ErrorCode::DuplicateId, bus_label(b.id));
        if (!(b.lat >= -90.0 && b.lat <= 90.0) || !(b.lon >= -180.0 && b.lon <= 180.0))
            throw Error(ErrorCode::InvalidCoordinate, bus_label(b.id));
        if (!std::isfinite(b.injection_mw))
            throw Error(ErrorCode::InvalidNetwork, bus_label(b.id) + " has a non-finite injection");
    }
    for (std::size_t k = 0; k < branches.size(); ++k) {
        const auto& br = branches[k];
        if (!net.branch_index_.emplace(br.id, k).second)
            throw Error(ErrorCode::DuplicateId, branch_label(br.id));
        if (!net.bus_index_.contains(br.from_bus))
            throw Error(ErrorCode::UnknownBus, branch_label(br.id) + " references " + bus_label(br.from_bus));
        if (!net.bus_index_.contains(br.to_bus))
            throw Error(ErrorCode::UnknownBus, branch_label(br.id) + " references " + bus_label(br.to_bus));
        if (br.from_bus == br.to_bus) throw Error(ErrorCode::SelfLoop, branch_label(br.id));
        if (!(br.reactance_pu > 0.0) || !std::isfinite(br.reactance_pu))
            throw Error(ErrorCode::NonpositiveReactance, branch_label(br.id));
    }
    if (!net.bus_index_.contains(slack_bus)) throw Error(ErrorCode::UnknownSlack, bus_label(slack_bus));

    const double imbalance = std::accumulate(buses.begin(), buses.end(), 0.0,
                                             [](double acc, const Bus& b) { return acc + b.injection_mw; });
    if (std::abs(imbalance) > kBalanceTolerance)
        throw Error(ErrorCode::UnbalancedInjections,
                    "injections sum to " + std::to_string(imbalance) + " MW");
    buses[net.bus_index_.at(slack_bus)].injection_mw -= imbalance;

    net.buses_ = std::move(buses);
    net.branches_ = std::move(branches);
    net.slack_bus_ = slack_bus;
    net.mva_base_ = mva_base;

    if (count_components(net, std::nullopt) != 1)
        throw Error(ErrorCode::DisconnectedGraph, "in-service branches do not connect every bus");
    return net;
}

bool is_connected(const NetworkModel& net) { return count_components(net, std::nullopt) == 1; }

bool is_bridge(const NetworkModel& net, BranchId branch) {
    const auto k = net.branch_index(branch);
    if (!net.branches()[k].in_service) return false;
    return count_components(net, k) > count_components(net, std::nullopt);
}

// ---------------------------------------------------------------------------

struct DcSolver::Impl {
    // reduced_index[bus index] = row in the reduced system, or -1 for the slack
    std::vector<Eigen::Index> reduced_index;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor;
};

DcSolver::DcSolver(const NetworkModel& net) : net_(net), impl_(std::make_unique<Impl>()) {
    const auto n = net_.buses().size();
    const auto slack = net_.bus_index(net_.slack_bus());
    impl_->reduced_index.assign(n, -1);
    Eigen::Index next = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (i != slack) impl_->reduced_index[i] = next++;

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(4 * net_.branches().size());
    for (const auto& br : net_.branches()) {
        if (!br.in_service) continue;
        const double b = 1.0 / br.reactance_pu;
        const auto i = impl_->reduced_index[net_.bus_index(br.from_bus)];
        const auto j = impl_->reduced_index[net_.bus_index(br.to_bus)];
        if (i >= 0) triplets.emplace_back(i, i, b);
        if (j >= 0) triplets.emplace_back(j, j, b);
        if (i >= 0 && j >= 0) {
            triplets.emplace_back(i, j, -b);
            triplets.emplace_back(j, i, -b);
        }
    }
    Eigen::SparseMatrix<double> susceptance(next, next);
    susceptance.setFromTriplets(triplets.begin(), triplets.end());
    if (next > 0) {
        impl_->factor.compute(susceptance);
        if (impl_->factor.info() != Eigen::Success)
            throw Error(ErrorCode::SingularSystem, "reduced susceptance matrix could not be factored");
        const auto& d = impl_->factor.vectorD();
        if ((d.array() <= 0.0).any())
            throw Error(ErrorCode::SingularSystem, "reduced susceptance matrix is not positive definite");
    }
}

DcSolver::~DcSolver() = default;
DcSolver::DcSolver(DcSolver&&) noexcept = default;
DcSolver& DcSolver::operator=(DcSolver&&) noexcept = default;

BranchFlows DcSolver::flows(const std::vector<double>& injections_mw) const {
    const auto n = net_.buses().size();
    if (injections_mw.size() != n)
        throw Error(ErrorCode::LengthMismatch, "injection vector does not match bus count");
    const auto rows = static_cast<Eigen::Index>(n) - 1;

    Eigen::VectorXd rhs(rows);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = impl_->reduced_index[i];
        if (r >= 0) rhs[r] = injections_mw[i] / net_.mva_base();
    }
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(rows);
    if (rows > 0) {
        theta = impl_->factor.solve(rhs);
        if (impl_->factor.info() != Eigen::Success || !theta.allFinite())
            throw Error(ErrorCode::SingularSystem, "DC power flow solve failed");
    }

    auto angle = [&](BusId bus) {
        const auto r = impl_->reduced_index[net_.bus_index(bus)];
        return r >= 0 ? theta[r] : 0.0;
    };
    BranchFlows result;
    for (const auto& br : net_.branches()) {
        if (!br.in_service) continue;
        result.emplace(br.id, (angle(br.from_bus) - angle(br.to_bus)) / br.reactance_pu * net_.mva_base());
    }
    return result;
}

BranchFlows DcSolver::transfer_flows(BusId from, BusId to, double amount_mw) const {
    std::vector<double> injections(net_.buses().size(), 0.0);
    injections[net_.bus_index(from)] += amount_mw;
    injections[net_.bus_index(to)] -= amount_mw;
    return flows(injections);
}

BranchFlows dc_power_flow(const NetworkModel& net) {
    std::vector<double> injections;
    injections.reserve(net.buses().size());
    for (const auto& b : net.buses()) injections.push_back(b.injection_mw);
    return DcSolver(net).flows(injections);
}

DistributionFactors ptdf(const DcSolver& solver, const Transaction& transaction) {
    const auto& net = solver.network();
    if (!net.has_bus(transaction.from_bus))
        throw Error(ErrorCode::UnknownBus, bus_label(transaction.from_bus));
    if (!net.has_bus(transaction.to_bus)) throw Error(ErrorCode::UnknownBus, bus_label(transaction.to_bus));
    if (transaction.from_bus == transaction.to_bus)
        throw Error(ErrorCode::InvalidConfig, "transaction endpoints must differ");
    if (transaction.amount_mw == 0.0 || !std::isfinite(transaction.amount_mw))
        throw Error(ErrorCode::InvalidConfig, "transaction amount must be nonzero");

    DistributionFactors out;
    out.kind = FactorKind::Ptdf;
    out.transaction = transaction;
    for (const auto& [id, flow] : solver.transfer_flows(transaction.from_bus, transaction.to_bus,
                                                        transaction.amount_mw))
        out.values.emplace(id, flow / transaction.amount_mw);
    return out;
}

DistributionFactors ptdf(const NetworkModel& net, const Transaction& transaction) {
    return ptdf(DcSolver(net), transaction);
}

DistributionFactors lodf(const DcSolver& solver, BranchId outaged) {
    const auto& net = solver.network();
    const auto& line = net.branch(outaged);
    if (!line.in_service) throw Error(ErrorCode::BranchOutOfService, branch_label(outaged));
    if (is_bridge(net, outaged))
        throw Error(ErrorCode::IslandingOutage, "removing " + branch_label(outaged) + " islands the network");

    const auto phi = ptdf(solver, Transaction{line.from_bus, line.to_bus, 1.0}).values;
    const double denom = 1.0 - phi.at(outaged);
    if (std::abs(denom) < kIslandingTolerance)
        throw Error(ErrorCode::IslandingOutage, branch_label(outaged) + " carries the whole transfer");

    DistributionFactors out;
    out.kind = FactorKind::Lodf;
    out.outaged_branch = outaged;
    for (const auto& [id, value] : phi)
        if (id != outaged) out.values.emplace(id, value / denom);
    return out;
}

DistributionFactors lodf(const NetworkModel& net, BranchId outaged) { return lodf(DcSolver(net), outaged); }

std::map<BranchId, double> predicted_flow_change(const DcSolver& solver, const BranchFlows& pre_flows,
                                                 BranchId outaged) {
    const auto factors = lodf(solver, outaged);
    const double p_m = pre_flows.at(outaged);
    std::map<BranchId, double> delta;
    for (const auto& [id, zeta] : factors.values) delta.emplace(id, zeta * p_m);
    delta.emplace(outaged, -p_m);
    return delta;
}

std::map<BranchId, double> predicted_flow_change(const NetworkModel& net, BranchId outaged) {
    const DcSolver solver(net);
    std::vector<double> injections;
    for (const auto& b : net.buses()) injections.push_back(b.injection_mw);
    return predicted_flow_change(solver, solver.flows(injections), outaged);
}

double net_outflow(const NetworkModel& net, const BranchFlows& flows, BusId bus) {
    if (!net.has_bus(bus)) throw Error(ErrorCode::UnknownBus, bus_label(bus));
    double sum = 0.0;
    for (const auto& br : net.branches()) {
        if (br.from_bus != bus && br.to_bus != bus) continue;
        const auto it = flows.find(br.id);
        if (it == flows.end()) continue;
        sum += br.from_bus == bus ? it->second : -it->second;
    }
    return sum;
}

double kcl_residual(const NetworkModel& net, const BranchFlows& flows, BusId bus) {
    const auto& b = net.bus(bus);
    for (const auto& br : net.branches()) {
        if (br.in_service && (br.from_bus == bus || br.to_bus == bus) && !flows.contains(br.id))
            throw Error(ErrorCode::InvalidConfig, "flows are missing " + branch_label(br.id));
    }
    return std::abs(b.injection_mw - net_outflow(net, flows, bus));
}

NetworkModel apply_outage(const NetworkModel& net, BranchId branch) {
    const auto k = net.branch_index(branch);
    if (!net.branches()[k].in_service) throw Error(ErrorCode::BranchOutOfService, branch_label(branch));
    NetworkModel out = net;
    out.branches_[k].in_service = false;
    if (!is_connected(out))
        throw Error(ErrorCode::IslandingOutage, "removing " + branch_label(branch) + " islands the network");
    return out;
}

}  // namespace sentinel
