#include "siwave/curves.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace siwave {

namespace {

// Lambda is closed-form arithmetic; only rounding noise needs absorbing.
constexpr double kZeroTol = 1e-12;

bool lambda_is_zero(double lam, double D, const ExponentPair& pq) {
    const double scale =
        std::max({1.0, std::abs((pq.p + 1.0) / (pq.p * pq.q - 1.0)), std::abs(0.5 * (D - 1.0))});
    return std::abs(lam) <= kZeroTol * scale;
}

}  // namespace

std::string to_string(CaseLabel label) {
    switch (label) {
        case CaseLabel::subcritical_blowup: return "subcritical_blowup";
        case CaseLabel::critical_blowup: return "critical_blowup";
        case CaseLabel::doubly_critical_blowup: return "doubly_critical_blowup";
        case CaseLabel::outside_proved_region: return "outside_proved_region";
    }
    throw std::logic_error("bad CaseLabel");
}

CaseLabel case_label_from_string(const std::string& s) {
    if (s == "subcritical_blowup") return CaseLabel::subcritical_blowup;
    if (s == "critical_blowup") return CaseLabel::critical_blowup;
    if (s == "doubly_critical_blowup") return CaseLabel::doubly_critical_blowup;
    if (s == "outside_proved_region") return CaseLabel::outside_proved_region;
    throw std::domain_error("unknown case label: " + s);
}

double glassey_exponent(int N) {
    if (N < 1) throw std::domain_error("glassey_exponent: N must be >= 1");
    if (N == 1) return std::numeric_limits<double>::infinity();
    return 1.0 + 2.0 / (N - 1);
}

double sigma_shift(double mu) {
    if (mu < 0.0) throw std::domain_error("sigma_shift: mu must be nonnegative");
    if (mu < 1.0) return 2.0 * mu;
    if (mu < 2.0) return 2.0;
    return mu;
}

double lambda_curve(double D, const ExponentPair& pq) {
    pq.validate();
    if (!(D > 0.0)) throw std::domain_error("lambda_curve: dimension must be positive");
    return (pq.p + 1.0) / (pq.p * pq.q - 1.0) - 0.5 * (D - 1.0);
}

double omega(int N, double shift1, double shift2, const ExponentPair& pq) {
    if (shift1 < 0.0 || shift2 < 0.0) throw std::domain_error("omega: shifts must be nonnegative");
    const ExponentPair swapped{pq.q, pq.p};
    return std::max(lambda_curve(N + shift1, pq), lambda_curve(N + shift2, swapped));
}

RegionClassification classify(int N, double mu1, double mu2, double p, double q) {
    ModelParams params;
    params.N = N;
    params.mu1.mu = mu1;
    params.mu2.mu = mu2;
    params.pq = ExponentPair{p, q};
    return classify(params);
}

RegionClassification classify(const ModelParams& params) {
    const int N = params.N;
    const double mu1 = params.mu1.mu, mu2 = params.mu2.mu;
    const ExponentPair& pq = params.pq;
    const ExponentPair swapped{pq.q, pq.p};

    RegionClassification rc;
    rc.lambda_pq = lambda_curve(N + mu1, pq);
    rc.lambda_qp = lambda_curve(N + mu2, swapped);
    rc.omega_mu = std::max(rc.lambda_pq, rc.lambda_qp);
    rc.omega_sigma = omega(N, sigma_shift(mu1), sigma_shift(mu2), pq);

    const bool z_pq = lambda_is_zero(rc.lambda_pq, N + mu1, pq);
    const bool z_qp = lambda_is_zero(rc.lambda_qp, N + mu2, swapped);
    const double pq1 = pq.p * pq.q - 1.0;

    // omega_mu vanishes iff the larger Lambda is a (tolerance) zero
    const bool omega_zero = (z_pq && (z_qp || rc.lambda_qp < 0.0)) ||
                            (z_qp && (z_pq || rc.lambda_pq < 0.0));

    char buf[64];
    if (z_pq && z_qp) {
        rc.case_label = CaseLabel::doubly_critical_blowup;
        rc.lifespan_exponent = std::min(pq1 / (pq.p + 1.0), pq1 / (pq.q + 1.0));
        std::snprintf(buf, sizeof buf, "exp(C*eps^-%.17g)", rc.lifespan_exponent);
        rc.lifespan_bound = buf;
    } else if (omega_zero) {
        rc.case_label = CaseLabel::critical_blowup;
        rc.lifespan_exponent = pq1;
        std::snprintf(buf, sizeof buf, "exp(C*eps^-%.17g)", rc.lifespan_exponent);
        rc.lifespan_bound = buf;
    } else if (rc.omega_mu > 0.0) {
        rc.case_label = CaseLabel::subcritical_blowup;
        rc.lifespan_exponent = rc.omega_mu;
        std::snprintf(buf, sizeof buf, "C*eps^-%.17g", rc.lifespan_exponent);
        rc.lifespan_bound = buf;
    } else {
        rc.case_label = CaseLabel::outside_proved_region;
        rc.lifespan_exponent = 0.0;
        rc.lifespan_bound = "none";
    }
    return rc;
}

}  // namespace siwave
