#pragma once

#include <stdexcept>
#include <string>

namespace gendergap {

/// Base for every fatal pipeline error. The message is prefixed with the
/// module that raised it, e.g. "[refdata] places.tsv:12: unknown region".
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error("[" + module + "] " + what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// Bad or unreadable corpus input. CLI exit code 1.
class InputError : public Error {
public:
    using Error::Error;
};

/// Bad configuration or reference data. CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace gendergap
