#pragma once

#include <stdexcept>
#include <string>

namespace srb {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A model was configured so that it is not a diffeomorphism.
class ModelError : public Error {
public:
    using Error::Error;
};

/// The hypotheses needed to turn an integral of phi into an exponent fail.
class HypothesisViolation : public Error {
public:
    using Error::Error;
};

/// Adaptive bisection hit its depth cap.
class DepthCapExceeded : public Error {
public:
    DepthCapExceeded(const std::string& what, double lo, double hi)
        : Error(what), lo_(lo), hi_(hi) {}
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    double lo_;
    double hi_;
};

class NonStabilization : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Error re-thrown by the pipeline with the name of the failing stage.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace srb
