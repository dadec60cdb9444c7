#pragma once

#include <stdexcept>
#include <string>

namespace siwave {

/// Bad run/experiment configuration (grid too coarse, cone exits domain, ...).
/// The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// A quadrature could not reach the requested tolerance; carries the
/// estimated residual so callers can decide whether to retry with a
/// finer rule.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Initial data violating the sign hypotheses (detected through a
/// nonpositive C(f,g)).
class data_admissibility_error : public std::runtime_error {
public:
    explicit data_admissibility_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace siwave
