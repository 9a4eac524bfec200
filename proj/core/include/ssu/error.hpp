#pragma once

#include <stdexcept>
#include <string>

namespace ssu {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input data: TLE files, profile tables,
/// weather traces and scenario files. The CLI maps these to exit code 2.
class IngestError : public Error {
public:
    using Error::Error;
};

class SchemaViolation : public IngestError {
public:
    SchemaViolation(std::string path, std::string reason)
        : IngestError("schema violation at " + path + ": " + reason),
          path_(std::move(path)), reason_(std::move(reason)) {}

    const std::string& path() const noexcept { return path_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string path_;
    std::string reason_;
};

class ConfigError : public IngestError {
public:
    using IngestError::IngestError;
};

/// Two states that must share an epoch do not.
class EpochMismatch : public Error {
public:
    EpochMismatch() : Error("state vectors do not share an epoch") {}
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

}  // namespace ssu
