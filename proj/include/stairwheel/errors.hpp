#pragma once

#include <stdexcept>
#include <string>

namespace stairwheel {

// Base class for all toolkit errors. Subtypes distinguish validation
// failures (bad inputs, exit 1 in the CLI) from I/O failures (exit 2).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// design_space
class DisjointChildCircles : public ValidationError {
public:
    using ValidationError::ValidationError;
};
class InfeasibleBounds : public ValidationError {
public:
    using ValidationError::ValidationError;
};
class NoFeasibleN : public ValidationError {
public:
    using ValidationError::ValidationError;
};
class DegenerateGeometry : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// taguchi
class ArityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};
class NonPositiveResponse : public ValidationError {
public:
    using ValidationError::ValidationError;
};
class ShapeMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// gra / anova
class WeightError : public ValidationError {
public:
    using ValidationError::ValidationError;
};
class EmptySignificantSet : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// pipeline ingestion
class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};
class MissingRun : public ValidationError {
public:
    using ValidationError::ValidationError;
};
class DuplicateRun : public ValidationError {
public:
    using ValidationError::ValidationError;
};
class NonNumeric : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace stairwheel
