#pragma once

#include <stdexcept>
#include <string>

namespace mlcrit {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed polynomial or model-file text; `offset` is a byte position into the input.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// An identifier that is not a variable of the active ring.
class UnknownVariableError : public Error {
public:
    explicit UnknownVariableError(const std::string& name)
        : Error("unknown variable '" + name + "'"), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

// Raised when an operation requires a zero-dimensional (or proper) ideal and the
// actual dimension differs; carries the dimension that was found.
class DimensionError : public Error {
public:
    DimensionError(const std::string& msg, int dimension)
        : Error(msg + " (dimension " + std::to_string(dimension) + ")"), dimension_(dimension) {}
    int dimension() const { return dimension_; }

private:
    int dimension_;
};

// The unit ideal <1> appeared where a proper ideal was required.
class UnitIdealError : public Error {
public:
    explicit UnitIdealError(const std::string& msg) : Error(msg) {}
};

// A Groebner computation exceeded its deadline; `stage` names the computation.
class ComputationTimeout : public Error {
public:
    ComputationTimeout(const std::string& stage)
        : Error("computation timed out during " + stage), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

// A numerical certification failed (residual too large, inconsistent multipliers,
// rank-deficient constraint Jacobian, and similar).
class ToleranceError : public Error {
public:
    explicit ToleranceError(const std::string& msg) : Error(msg) {}
};

// Bad input at the API or CLI boundary (wrong data length, unknown model, ...).
class UsageError : public Error {
public:
    explicit UsageError(const std::string& msg) : Error(msg) {}
};

} // namespace mlcrit
