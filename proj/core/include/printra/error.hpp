#pragma once

#include <stdexcept>
#include <string>

namespace printra {

// Error taxonomy shared by library and CLI. The CLI maps each family to a
// distinct exit code (see tools/printra.cpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Malformed input: bad header, bad field, wrong arity, invariant violation.
class SchemaError : public Error {
public:
    using Error::Error;
};

class EmptyDatasetError : public Error {
public:
    using Error::Error;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double max_kkt_violation)
        : Error(msg), max_kkt_violation(max_kkt_violation) {}
    double max_kkt_violation;
};

// predict() before fit(), and similar lifecycle misuse.
class StateError : public Error {
public:
    using Error::Error;
};

// Corrupt or version-incompatible model files.
class FormatError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

// Metric undefined for the given records (zero denominator, zero variance).
class DegenerateTargetError : public Error {
public:
    using Error::Error;
};

} // namespace printra
