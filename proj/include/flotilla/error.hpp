#pragma once

#include <stdexcept>
#include <string>

namespace flotilla {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a scenario file violates the schema. Carries the key path of
/// the offending entry so tooling can point at the exact field.
struct SchemaError : Error {
    SchemaError(const std::string& key_path, const std::string& msg)
        : Error(key_path.empty() ? msg : key_path + ": " + msg), key_path(key_path) {}

    std::string key_path;
};

}  // namespace flotilla
