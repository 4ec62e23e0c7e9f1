#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace glelab {

// Every failure raised by the library derives from Error so callers (the CLI
// in particular) can map categories onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

class SchemeError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

class NotPsdError : public NumericalError {
public:
    NotPsdError(double eigenvalue, const std::string& what)
        : NumericalError(what), eigenvalue_(eigenvalue) {}
    double eigenvalue() const noexcept { return eigenvalue_; }

private:
    double eigenvalue_;
};

class InstabilityError : public NumericalError {
public:
    InstabilityError(double spectral_radius, const std::string& what)
        : NumericalError(what), spectral_radius_(spectral_radius) {}
    double spectral_radius() const noexcept { return spectral_radius_; }

private:
    double spectral_radius_;
};

class DivergenceError : public NumericalError {
public:
    DivergenceError(std::size_t step, const std::string& what)
        : NumericalError(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace glelab
