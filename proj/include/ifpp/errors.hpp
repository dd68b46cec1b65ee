#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ifpp {

/// Failure categories surfaced to callers and mapped onto CLI exit codes.
enum class ErrorKind {
    Domain,
    UnsupportedCombination,
    WrongSpec,
    NotContained,
    Oversize,
    Inconclusive,
    TruncationFailure,
    UnboundedShape,
    InvalidGadget,
    HypothesisUnmet,
    Config,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::UnsupportedCombination: return "UnsupportedCombination";
        case ErrorKind::WrongSpec: return "WrongSpec";
        case ErrorKind::NotContained: return "NotContained";
        case ErrorKind::Oversize: return "Oversize";
        case ErrorKind::Inconclusive: return "Inconclusive";
        case ErrorKind::TruncationFailure: return "TruncationFailure";
        case ErrorKind::UnboundedShape: return "UnboundedShape";
        case ErrorKind::InvalidGadget: return "InvalidGadget";
        case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
        case ErrorKind::Config: return "ConfigError";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised when a box-truncated computation cannot be certified even at the
/// margin cap. Carries the replication seed so the failure can be replayed.
class TruncationFailure : public Error {
public:
    TruncationFailure(std::uint64_t seed, const std::string& what)
        : Error(ErrorKind::TruncationFailure, what + " (replication seed " + std::to_string(seed) + ")"),
          seed_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ifpp
