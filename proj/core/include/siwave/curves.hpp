#pragma once

#include <string>

#include "siwave/model.hpp"

namespace siwave {

enum class CaseLabel {
    subcritical_blowup,
    critical_blowup,
    doubly_critical_blowup,
    outside_proved_region,
};

std::string to_string(CaseLabel label);
CaseLabel case_label_from_string(const std::string& s);

/// Where a parameter instance sits relative to the blow-up theorem, with
/// both the mu-shifted and sigma-shifted region values.
struct RegionClassification {
    double lambda_pq = 0.0;  // Lambda(N + mu1, p, q)
    double lambda_qp = 0.0;  // Lambda(N + mu2, q, p)
    double omega_mu = 0.0;
    double omega_sigma = 0.0;
    CaseLabel case_label = CaseLabel::outside_proved_region;
    double lifespan_exponent = 0.0;
    std::string lifespan_bound;  // the matching bound shape, e.g. "C*eps^-0.75"
};

/// p_G(N) = 1 + 2/(N-1); +infinity for N = 1.
double glassey_exponent(int N);

/// sigma(mu): 2mu on [0,1), 2 on [1,2), mu on [2,inf).
double sigma_shift(double mu);

/// Lambda(D, p, q) = (p+1)/(pq-1) - (D-1)/2 for the (possibly shifted)
/// dimension D.
double lambda_curve(double D, const ExponentPair& pq);

/// max(Lambda(N+shift1, p, q), Lambda(N+shift2, q, p)).
double omega(int N, double shift1, double shift2, const ExponentPair& pq);

RegionClassification classify(const ModelParams& params);
RegionClassification classify(int N, double mu1, double mu2, double p, double q);

}  // namespace siwave
