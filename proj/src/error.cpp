#include "vantage/error.hpp"

namespace vantage {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::IdenticalPoints: return "IdenticalPoints";
        case ErrorKind::InvalidResult: return "InvalidResult";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::EmptyInput: return "EmptyInput";
        case ErrorKind::UnsupportedGeometry: return "UnsupportedGeometry";
        case ErrorKind::NetworkError: return "NetworkError";
        case ErrorKind::RateLimited: return "RateLimited";
        case ErrorKind::MalformedResponse: return "MalformedResponse";
        case ErrorKind::TooShort: return "TooShort";
        case ErrorKind::DegenerateEdge: return "DegenerateEdge";
        case ErrorKind::EmptyCorpus: return "EmptyCorpus";
        case ErrorKind::InvalidBearing: return "InvalidBearing";
        case ErrorKind::UnknownPointId: return "UnknownPointId";
        case ErrorKind::UnknownTrip: return "UnknownTrip";
        case ErrorKind::DegenerateSample: return "DegenerateSample";
        case ErrorKind::PlacementFailure: return "PlacementFailure";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

bool Error::is_input_error() const noexcept {
    switch (kind_) {
        case ErrorKind::InvalidArgument:
        case ErrorKind::ParseError:
        case ErrorKind::EmptyInput:
        case ErrorKind::UnsupportedGeometry:
        case ErrorKind::TooShort:
        case ErrorKind::EmptyCorpus:
        case ErrorKind::UnknownTrip:
        case ErrorKind::DegenerateSample:
        case ErrorKind::PlacementFailure:
        case ErrorKind::Io:
        case ErrorKind::NetworkError:
        case ErrorKind::RateLimited:
        case ErrorKind::MalformedResponse:
            return true;
        default:
            return false;
    }
}

}  // namespace vantage
