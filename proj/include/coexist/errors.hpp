#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "coexist/map.hpp"

namespace coexist {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The truncated resonant normal form only exists for lambda*sigma == 1.
class ResonanceFormUnavailable : public Error {
public:
    explicit ResonanceFormUnavailable(double lambda_sigma)
        : Error("resonant T0^k expansion requires lambda*sigma = 1 (got " +
                std::to_string(lambda_sigma) + ")"),
          lambda_sigma(lambda_sigma) {}
    double lambda_sigma;
};

class NegativeDiscriminant : public Error {
public:
    explicit NegativeDiscriminant(double delta)
        : Error("discriminant is negative: " + std::to_string(delta)), delta(delta) {}
    double delta;
};

class DivisionByZero : public Error {
public:
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

/// Coefficients make an analytic inverse or root formula undefined.
class DegenerateCoefficients : public Error {
public:
    explicit DegenerateCoefficients(const std::string& what) : Error(what) {}
};

class ItineraryInvalid : public Error {
public:
    ItineraryInvalid(std::size_t step, Region region, bool blend_only)
        : Error("closed-form orbit leaves its itinerary at step " + std::to_string(step) +
                " (region " + std::string(to_string(region)) + ")"),
          step(step), region(region), blend_only(blend_only) {}
    std::size_t step;
    Region region;
    /// Every offending point lies in the blend strip.
    bool blend_only;
};

class NoConvergence : public Error {
public:
    NoConvergence(int iterations, double last_residual)
        : Error("Newton did not converge after " + std::to_string(iterations) +
                " iterations (residual " + std::to_string(last_residual) + ")"),
          iterations(iterations), last_residual(last_residual) {}
    int iterations;
    double last_residual;
};

class SingularJacobian : public Error {
public:
    explicit SingularJacobian(int at_iterate)
        : Error("singular Newton Jacobian at iterate " + std::to_string(at_iterate)),
          at_iterate(at_iterate) {}
    int at_iterate;
};

class Escaped : public Error {
public:
    explicit Escaped(std::size_t at_step)
        : Error("orbit left the escape radius at step " + std::to_string(at_step)),
          at_step(at_step) {}
    std::size_t at_step;
};

class InsufficientData : public Error {
public:
    explicit InsufficientData(std::size_t found)
        : Error("need at least 4 orbits for a growth fit, found " + std::to_string(found)),
          found(found) {}
    std::size_t found;
};

class InvalidWindow : public Error {
public:
    explicit InvalidWindow(const std::string& what) : Error(what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

/// Configuration could not be parsed or validated. `key` names the culprit.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key.empty() ? what : "config key '" + key + "': " + what), key(std::move(key)) {}
    std::string key;
};

}  // namespace coexist
