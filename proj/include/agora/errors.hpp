#pragma once

#include <stdexcept>
#include <string>

namespace agora {

// Base for everything thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user-supplied parameters or malformed input files (CLI exit code 1).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Failures at runtime on valid inputs: I/O, resource limits, numeric
// overflow guards (CLI exit code 2).
class RuntimeError : public Error {
public:
    explicit RuntimeError(const std::string& msg) : Error(msg) {}
};

class IoError : public RuntimeError {
public:
    IoError(const std::string& path, const std::string& msg)
        : RuntimeError(path + ": " + msg), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// A level statistic was requested on a tree whose truncation mode cannot
// guarantee that the level is fully materialized.
class IncompleteLevelError : public ValidationError {
public:
    explicit IncompleteLevelError(const std::string& msg) : ValidationError(msg) {}
};

// The simulated horizon is too small for the requested statistic.
class HorizonError : public ValidationError {
public:
    explicit HorizonError(const std::string& msg) : ValidationError(msg) {}
};

}  // namespace agora
