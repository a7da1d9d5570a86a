#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sentinel {

enum class ErrorCode {
    // network model
    DisconnectedGraph,
    DuplicateId,
    NonpositiveReactance,
    UnknownSlack,
    UnknownBus,
    UnknownBranch,
    SelfLoop,
    UnbalancedInjections,
    InvalidCoordinate,
    InvalidNetwork,
    SingularSystem,
    IslandingOutage,
    BranchOutOfService,
    // scenarios and datasets
    InvalidConfig,
    NoMonitoredBranch,
    EmptyDataset,
    // signal processing
    EvenWindow,
    LengthMismatch,
    SeriesTooShort,
    WindowOutOfRange,
    // files
    ParseError,
    SchemaError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Process exit status for a failure of this kind: 3 for data/schema
/// problems, 4 for network-model problems (islanding, singular systems).
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace sentinel
