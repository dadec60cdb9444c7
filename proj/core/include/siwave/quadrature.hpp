#pragma once

#include <cstddef>
#include <vector>

namespace siwave {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Rule of the given order, computed once and cached (thread safe).
const GaussLegendreRule& gauss_legendre(int order);

/// One Gauss-Legendre panel over [a, b].
template <class F>
double gl_integrate(F&& f, double a, double b, int order) {
    const GaussLegendreRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

/// Settings shared by every special-function quadrature.  truncation_bound
/// is the upper cut for the hyperbolic-angle integral; 0 means "solve it
/// from the tolerance for the t at hand".
struct QuadratureConfig {
    int node_count = 256;
    double truncation_bound = 0.0;
    int angular_nodes = 64;
    double tolerance = 1e-10;

    void validate() const;
};

}  // namespace siwave
