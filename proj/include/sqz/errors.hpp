#pragma once

#include <stdexcept>
#include <string>

namespace sqz {

// Raised when inputs are valid numbers but describe something the physics
// does not allow (a state purer than the uncertainty bound, an OPO above
// threshold, ...). The CLI maps these to a dedicated exit status.
class PhysicsError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class NonphysicalPairError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class DegenerateFitError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class AboveThresholdError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class PerfectCavityError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

class InconsistentBudgetError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

// An error signal that carries no information about the locked variable.
class NoDiscriminationError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

// Bad configuration. `path()` names the offending field, e.g. "cavity.squeezer/r1".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace sqz
