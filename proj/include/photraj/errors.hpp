#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace photraj {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the operation's domain (bad split, non-positive wavelength, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// 1 - v0 (or 1 - v0/n) is too close to zero to build a superposition weight.
class NearSingular : public Error {
public:
    using Error::Error;
};

// Quantum potential evaluated at a wavefunction node.
class NodeSingularity : public Error {
public:
    using Error::Error;
};

// Analysis needs more oscillations than the signal contains.
class InsufficientOscillations : public Error {
public:
    using Error::Error;
};

// Base for failures raised while integrating; carries the time of failure.
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double t) : Error(what), t_(t) {}
    double time() const noexcept { return t_; }

private:
    double t_;
};

// The velocity-field denominator |A e^{ix} + e^{-ix}| fell below singularity_eps.
class SingularityEncountered : public IntegrationError {
public:
    SingularityEncountered(double t, std::size_t axis, double denom)
        : IntegrationError("velocity field singular on axis " + axis_name(axis) + " at t_bar = " +
                               std::to_string(t) + " (|denominator| = " + std::to_string(denom) + ")",
                           t),
          axis_(axis),
          denom_(denom) {}

    std::size_t axis() const noexcept { return axis_; }
    double denominator() const noexcept { return denom_; }

    static std::string axis_name(std::size_t axis) {
        return axis == 0 ? "x" : axis == 1 ? "y" : std::to_string(axis);
    }

private:
    std::size_t axis_;
    double denom_;
};

class StepUnderflow : public IntegrationError {
public:
    StepUnderflow(double t, double h)
        : IntegrationError("adaptive step underflow at t_bar = " + std::to_string(t) +
                               " (h = " + std::to_string(h) + ")",
                           t) {}
};

}  // namespace photraj
