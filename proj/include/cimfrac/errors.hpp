#pragma once

#include <stdexcept>
#include <string>

namespace cimfrac {

/// Contour angle too large for the admissible sector; reduce theta or raise epsilon.
struct NonPositiveStrip : std::domain_error {
    using std::domain_error::domain_error;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct SingularPoint : std::domain_error {
    using std::domain_error::domain_error;
};

struct ResolventSingular : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BadMeshSize : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SolveFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfWindow : std::domain_error {
    using std::domain_error::domain_error;
};

struct MissingReference : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CacheCorrupt : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace cimfrac
