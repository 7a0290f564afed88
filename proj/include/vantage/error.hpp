#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vantage {

enum class ErrorKind {
    IdenticalPoints,
    InvalidResult,
    InvalidArgument,
    ParseError,
    EmptyInput,
    UnsupportedGeometry,
    NetworkError,
    RateLimited,
    MalformedResponse,
    TooShort,
    DegenerateEdge,
    EmptyCorpus,
    InvalidBearing,
    UnknownPointId,
    UnknownTrip,
    DegenerateSample,
    PlacementFailure,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; `kind()` distinguishes the failure.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // True for failures caused by bad user input rather than a library defect.
    bool is_input_error() const noexcept;

private:
    ErrorKind kind_;
};

class ParseError : public Error {
public:
    ParseError(std::string source, std::size_t row, const std::string& reason)
        : Error(ErrorKind::ParseError, source + ":" + std::to_string(row) + ": " + reason),
          source_(std::move(source)), row_(row) {}

    const std::string& source() const noexcept { return source_; }
    /// 1-based line number (0 when the error is not line-oriented).
    std::size_t row() const noexcept { return row_; }

private:
    std::string source_;
    std::size_t row_;
};

}  // namespace vantage
