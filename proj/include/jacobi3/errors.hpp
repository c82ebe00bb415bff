#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "jacobi3/point.hpp"

namespace jacobi3 {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, std::size_t offset)
        : Error("syntax error at byte " + std::to_string(offset) + ": " + message), offset_(offset)
    {
    }
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(const std::string& name, std::size_t offset)
        : Error("unknown identifier '" + name + "' at byte " + std::to_string(offset)), name_(name), offset_(offset)
    {
    }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

private:
    std::string name_;
    std::size_t offset_;
};

class EvalDomainError : public Error {
public:
    using Error::Error;
};

class MissingBinding : public Error {
public:
    using Error::Error;
};

/// An error tied to a location in R^3 (degenerate construction input and the like).
class PointError : public Error {
public:
    PointError(const std::string& message, std::optional<Point3> where)
        : Error(where ? message + " at " + to_string(*where) : message), point_(where)
    {
    }
    [[nodiscard]] const std::optional<Point3>& point() const noexcept { return point_; }

private:
    std::optional<Point3> point_;
};

class DegenerateHelicity : public PointError {
public:
    using PointError::PointError;
};

class DegenerateInput : public PointError {
public:
    using PointError::PointError;
};

class WrongKind : public Error {
public:
    using Error::Error;
};

class StationaryPsi : public PointError {
public:
    using PointError::PointError;
};

class TransversalMiss : public PointError {
public:
    using PointError::PointError;
};

class StepFailure : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace jacobi3
