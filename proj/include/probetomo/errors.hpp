#ifndef PROBETOMO_ERRORS_HPP
#define PROBETOMO_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace probetomo {

/// Base of every error raised by the library. `module()` names the component
/// that detected the problem so drivers can report provenance.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// Malformed or inconsistent user input (config keys, files, arguments).
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error("config", what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// Physics or numerical validation failure: cutoff inadequate, norm drift,
/// unnormalized input, degenerate branch.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Spectral peaks cannot be separated at the requested window width.
class ResolvabilityError : public Error {
public:
    ResolvabilityError(const std::string& what, std::vector<std::pair<std::string, std::string>> collisions)
        : Error("spectral", what), collisions_(std::move(collisions)) {}

    const std::vector<std::pair<std::string, std::string>>& collisions() const noexcept { return collisions_; }

private:
    std::vector<std::pair<std::string, std::string>> collisions_;
};

/// Non-fatal condition surfaced to the caller instead of being dropped.
struct Warning {
    std::string source;
    std::string message;
    double value = 0.0;
};

} // namespace probetomo

#endif
