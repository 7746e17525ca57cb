#pragma once

#include <stdexcept>
#include <string>

namespace riverbank {

// Error hierarchy shared by all modules. Every condition that callers are
// expected to handle gets its own type so the CLI can map it to an exit code.

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct NonPositiveResolution : Error {
    explicit NonPositiveResolution(const std::string& msg) : Error(msg) {}
};

struct NonPositiveInterval : Error {
    explicit NonPositiveInterval(const std::string& msg) : Error(msg) {}
};

struct EmptyInput : Error {
    explicit EmptyInput(const std::string& msg) : Error(msg) {}
};

struct InsufficientEntries : Error {
    explicit InsufficientEntries(const std::string& msg) : Error(msg) {}
};

struct MissingStratumField : Error {
    explicit MissingStratumField(const std::string& msg) : Error(msg) {}
};

struct SiteYearOverlap : Error {
    explicit SiteYearOverlap(const std::string& msg) : Error(msg) {}
};

struct StepTooLarge : Error {
    explicit StepTooLarge(const std::string& msg) : Error(msg) {}
};

struct SchemaMismatch : Error {
    explicit SchemaMismatch(const std::string& msg) : Error(msg) {}
};

struct CoregistrationFailure : Error {
    explicit CoregistrationFailure(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace riverbank
