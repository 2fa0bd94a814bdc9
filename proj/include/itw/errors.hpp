#pragma once

#include <stdexcept>
#include <string>

namespace itw {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Smallest singular value fell below the relative rank cutoff.
class SingularMatrix : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class NegativeEigenvalue : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

/// The standing hypothesis [N1, Theta1] = 0 is violated beyond tolerance.
class CommutatorTooLarge : public Error {
public:
    CommutatorTooLarge(const std::string& msg, double defect)
        : Error(msg), defect_(defect) {}
    double defect() const { return defect_; }

private:
    double defect_ = 0.0;
};

class SingularN2 : public Error {
public:
    using Error::Error;
};

class DegenerateNu : public Error {
public:
    using Error::Error;
};

class BiorthogonalityViolated : public Error {
public:
    using Error::Error;
};

/// A transported vector that should never vanish came out numerically zero.
class ZeroVector : public Error {
public:
    using Error::Error;
};

class HypothesisViolated : public Error {
public:
    using Error::Error;
};

class BadMetric : public Error {
public:
    using Error::Error;
};

class NotPseudoHermitian : public Error {
public:
    using Error::Error;
};

class SimilarFormNotHermitian : public Error {
public:
    using Error::Error;
};

class QOutOfRange : public Error {
public:
    using Error::Error;
};

/// Malformed input file (matrix JSON and friends).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (CLI contract: exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace itw
