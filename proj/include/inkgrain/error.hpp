#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace inkgrain {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a conversion.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid shapes, sizes or tunables.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input carries no usable information (constant histogram, all-zero image, ...).
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Least-squares design matrix lacks full column rank.
class FitDegenerateError : public DegenerateError {
public:
    FitDegenerateError(const std::string& what, std::array<double, 4> direction)
        : DegenerateError(what), direction_(direction) {}

    /// Unit vector in (pc, pm, o, w) coefficient space that the data cannot resolve.
    const std::array<double, 4>& direction() const noexcept { return direction_; }

private:
    std::array<double, 4> direction_;
};

/// KNN refinement was asked to run without exemplars.
class CannotRefineError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace inkgrain
