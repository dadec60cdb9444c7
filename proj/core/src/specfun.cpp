#include "siwave/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "siwave/errors.hpp"

namespace siwave {

namespace {

// Smallest B with t(cosh B - 1) - |nu| B >= log(1/tol) + margin, i.e. the
// truncated tail of the (scaled) integrand is below tolerance.
double solve_truncation(double nu, double t, double tol) {
    const double L = std::log(1.0 / tol) + 4.0;
    const double anu = std::abs(nu);
    double B = 1.0;
    for (int it = 0; it < 40; ++it) {
        const double next = std::acosh(1.0 + (L + anu * B) / t);
        if (std::abs(next - B) < 1e-12) {
            B = next;
            break;
        }
        B = next;
    }
    return B + 0.25;
}

// Composite GL over [0, B] of f, with the two-rule residual estimate.
template <class F>
double panel_integrate(F&& f, double B, int nodes, double tol, const char* what) {
    const int panels = std::max(1, static_cast<int>(std::ceil(B)));
    const double w = B / panels;
    double full = 0.0, coarse = 0.0;
    const int half_nodes = std::max(8, nodes / 2);
    for (int k = 0; k < panels; ++k) {
        const double a = k * w, b = a + w;
        full += gl_integrate(f, a, b, nodes);
        coarse += gl_integrate(f, a, b, half_nodes);
    }
    const double residual = std::abs(full - coarse) / std::max(std::abs(full), 1e-300);
    if (residual > tol)
        throw accuracy_error(std::string(what) + ": tolerance unreachable at given node_count",
                             residual);
    return full;
}

double k_scaled_impl(double nu, double t, const QuadratureConfig& cfg) {
    cfg.validate();
    if (t <= 0.0) throw std::domain_error("modified_bessel_k: t must be positive");
    const double B = cfg.truncation_bound > 0.0 ? cfg.truncation_bound
                                                : solve_truncation(nu, t, cfg.tolerance);
    auto f = [nu, t](double z) { return std::exp(-t * (std::cosh(z) - 1.0)) * std::cosh(nu * z); };
    return panel_integrate(f, B, cfg.node_count, cfg.tolerance, "modified_bessel_k");
}

// e^{-r} phi(r) for N >= 2, with panels refined near a = 0 where the
// integrand e^{-r(1-cos a)} concentrates for large r.
double phi_scaled_sphere(int N, double r, const QuadratureConfig& cfg) {
    const double coeff = sphere_surface(N - 2);
    auto f = [N, r](double a) {
        const double s = std::sin(a);
        const double pw = N == 2 ? 1.0 : (N == 3 ? s : std::pow(s, N - 2));
        return std::exp(-r * (1.0 - std::cos(a))) * pw;
    };
    std::vector<double> edges{0.0};
    double d = std::min(M_PI / 4.0, 3.0 / std::sqrt(1.0 + r));
    while (edges.back() < M_PI) {
        edges.push_back(std::min(M_PI, edges.back() + d));
        d *= 2.0;
    }
    double full = 0.0, coarse = 0.0;
    const int half_nodes = std::max(8, cfg.angular_nodes / 2);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        full += gl_integrate(f, edges[k], edges[k + 1], cfg.angular_nodes);
        coarse += gl_integrate(f, edges[k], edges[k + 1], half_nodes);
    }
    const double residual = std::abs(full - coarse) / std::max(std::abs(full), 1e-300);
    if (residual > cfg.tolerance)
        throw accuracy_error("phi_radial: tolerance unreachable at given angular_nodes", residual);
    return coeff * full;
}

}  // namespace

double sphere_surface(int d) {
    if (d < 0) throw std::domain_error("sphere_surface: dimension must be nonnegative");
    return 2.0 * std::pow(M_PI, 0.5 * (d + 1)) / std::tgamma(0.5 * (d + 1));
}

double modified_bessel_k_scaled(double nu, double t, const QuadratureConfig& cfg) {
    return k_scaled_impl(nu, t, cfg);
}

double modified_bessel_k(double nu, double t, const QuadratureConfig& cfg) {
    return std::exp(-t) * k_scaled_impl(nu, t, cfg);
}

double phi_radial_scaled(int N, double r, const QuadratureConfig& cfg) {
    cfg.validate();
    if (N < 1) throw std::domain_error("phi_radial: N must be >= 1");
    if (r < 0.0) throw std::domain_error("phi_radial: r must be nonnegative");
    if (N == 1) return 1.0 + std::exp(-2.0 * r);
    return phi_scaled_sphere(N, r, cfg);
}

double phi_radial(int N, double r, const QuadratureConfig& cfg) {
    return std::exp(r) * phi_radial_scaled(N, r, cfg);
}

double rho_scaled(double mu, double t, const QuadratureConfig& cfg) {
    if (mu < 0.0) throw std::domain_error("rho: mu must be nonnegative");
    if (t < 0.0) throw std::domain_error("rho: t must be nonnegative");
    return std::pow(1.0 + t, 0.5 * (mu + 1.0)) *
           modified_bessel_k_scaled(0.5 * (mu - 1.0), 1.0 + t, cfg);
}

double rho(double mu, double t, const QuadratureConfig& cfg) {
    return std::exp(-(1.0 + t)) * rho_scaled(mu, t, cfg);
}

double rho_log_deriv(double mu, double t, const QuadratureConfig& cfg) {
    if (mu < 0.0) throw std::domain_error("rho_log_deriv: mu must be nonnegative");
    if (t < 0.0) throw std::domain_error("rho_log_deriv: t must be nonnegative");
    const double kp = modified_bessel_k_scaled(0.5 * (mu + 1.0), 1.0 + t, cfg);
    const double km = modified_bessel_k_scaled(0.5 * (mu - 1.0), 1.0 + t, cfg);
    return mu / (1.0 + t) - kp / km;
}

double gamma_coeff(double mu, double t, const QuadratureConfig& cfg) {
    return mu / (1.0 + t) - 2.0 * rho_log_deriv(mu, t, cfg);
}

double psi(double mu, int N, double r, double t, const QuadratureConfig& cfg) {
    const double ar = std::abs(r);  // radial extension: phi is even
    return rho_scaled(mu, t, cfg) * phi_radial_scaled(N, ar, cfg) * std::exp(ar - t - 1.0);
}

double multiplier_m(double mu, double t) {
    if (t < 0.0) throw std::domain_error("multiplier_m: t must be nonnegative");
    return std::pow(1.0 + t, mu);
}

double gamma_window_start(double mu, const QuadratureConfig& cfg) {
    // Gamma -> 2 as t -> inf, which satisfies both criteria, so a finite
    // scan suffices; walk the grid backwards to find the last violation.
    const double t_end = 100.0, dt = 0.05;
    const int n = static_cast<int>(t_end / dt) + 1;
    int last_bad = -1;
    for (int i = n - 1; i >= 0; --i) {
        const double t = i * dt;
        const double g = gamma_coeff(mu, t, cfg);
        if (!(g > 0.0 && 0.25 - 3.0 * g / 32.0 > 0.0)) {
            last_bad = i;
            break;
        }
    }
    if (last_bad == n - 1)
        throw config_error("gamma_window_start: criteria not satisfied within the scan window");
    return (last_bad + 1) * dt;
}

}  // namespace siwave
