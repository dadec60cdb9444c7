#pragma once

#include <vector>

namespace siwave {

/// Nonlinearity powers; the standing assumption is p, q > 1.
struct ExponentPair {
    double p = 2.0;
    double q = 2.0;

    void validate() const;
};

/// Damping coefficient b(t) = mu/(1+t) plus an optional tabulated
/// perturbation delta(t) with finite integral (linearly interpolated,
/// zero beyond the table).
struct DampingProfile {
    double mu = 0.0;
    std::vector<double> perturb_t;
    std::vector<double> perturb_delta;

    bool has_perturbation() const { return !perturb_t.empty(); }
    double delta(double t) const;
    double coefficient(double t) const { return mu / (1.0 + t) + delta(t); }
    double perturbation_integral() const;
    void validate() const;
};

/// One full problem instance.
struct ModelParams {
    int N = 1;
    DampingProfile mu1;
    DampingProfile mu2;
    ExponentPair pq;
    double R = 1.0;
    double eps = 1.0;
    bool nonlinearity_on = true;

    // amplitudes of the four default bump profiles (unscaled by eps)
    double f1_scale = 1.0;
    double f2_scale = 1.0;
    double g1_scale = 1.0;
    double g2_scale = 1.0;

    void validate() const;
};

}  // namespace siwave
