#include "sentinel/error.hpp"

namespace sentinel {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::NonpositiveReactance: return "NonpositiveReactance";
        case ErrorCode::UnknownSlack: return "UnknownSlack";
        case ErrorCode::UnknownBus: return "UnknownBus";
        case ErrorCode::UnknownBranch: return "UnknownBranch";
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::UnbalancedInjections: return "UnbalancedInjections";
        case ErrorCode::InvalidCoordinate: return "InvalidCoordinate";
        case ErrorCode::InvalidNetwork: return "InvalidNetwork";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::IslandingOutage: return "IslandingOutage";
        case ErrorCode::BranchOutOfService: return "BranchOutOfService";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::NoMonitoredBranch: return "NoMonitoredBranch";
        case ErrorCode::EmptyDataset: return "EmptyDataset";
        case ErrorCode::EvenWindow: return "EvenWindow";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::WindowOutOfRange: return "WindowOutOfRange";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::DisconnectedGraph:
        case ErrorCode::UnknownSlack:
        case ErrorCode::UnknownBus:
        case ErrorCode::UnknownBranch:
        case ErrorCode::SelfLoop:
        case ErrorCode::NonpositiveReactance:
        case ErrorCode::DuplicateId:
        case ErrorCode::UnbalancedInjections:
        case ErrorCode::InvalidNetwork:
        case ErrorCode::SingularSystem:
        case ErrorCode::IslandingOutage:
        case ErrorCode::BranchOutOfService:
            return 4;
        default:
            return 3;
    }
}

}  // namespace sentinel
