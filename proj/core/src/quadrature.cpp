#include "siwave/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace siwave {

namespace {

// Nodes via Newton iteration on P_n, seeded with the Chebyshev-like
// asymptotic root estimate.  Weights w = 2 / ((1 - x^2) P_n'(x)^2).
GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one polishing pass after convergence
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                x -= p1 / dp;
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
    if (order < 1) throw std::domain_error("gauss_legendre: order must be >= 1");
    static std::mutex mu;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

void QuadratureConfig::validate() const {
    if (node_count < 16) throw std::domain_error("QuadratureConfig: node_count must be >= 16");
    if (angular_nodes < 1) throw std::domain_error("QuadratureConfig: angular_nodes must be >= 1");
    if (tolerance <= 0.0) throw std::domain_error("QuadratureConfig: tolerance must be positive");
    if (truncation_bound < 0.0)
        throw std::domain_error("QuadratureConfig: truncation_bound must be nonnegative");
}

}  // namespace siwave
