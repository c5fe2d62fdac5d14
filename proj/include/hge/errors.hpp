// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hge {

// Error categories map onto process exit codes (config -> 1, data -> 2)
// and onto the C API status enum.
enum class ErrorKind { config, data, internal };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

// Invalid parameters, shapes, schemas or option files.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(ErrorKind::config, msg) {}
};

// Malformed or inconsistent input data (files, indices, checksums).
class DataError : public Error {
public:
  explicit DataError(const std::string& msg) : Error(ErrorKind::data, msg) {}
};

}  // namespace hge
