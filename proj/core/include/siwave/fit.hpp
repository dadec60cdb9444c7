#pragma once

#include <span>
#include <string>

#include "siwave/curves.hpp"

namespace siwave {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::size_t n = 0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// Relative weight of the quadratic term over the x-span; large values mean
/// the data bend away from the fitted line (regime warning).
double quadratic_curvature(std::span<const double> x, std::span<const double> y);

/// Lifespan scaling fit in the variable matching the classification case:
/// log T against log eps (subcritical), or log T against eps^-a with the
/// case's exponent a (critical / doubly critical).
struct LifespanFit {
    LinearFit fit;
    CaseLabel case_used = CaseLabel::subcritical_blowup;
    std::string x_model;
    double span_decades = 0.0;
    double curvature = 0.0;
    bool regime_warning = false;
};

LifespanFit fit_lifespans(std::span<const double> eps, std::span<const double> T,
                          CaseLabel case_label, const ExponentPair& pq);

}  // namespace siwave
