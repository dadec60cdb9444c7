#pragma once

#include "siwave/quadrature.hpp"

namespace siwave {

/// Surface measure of the unit d-sphere embedded in R^{d+1}
/// (|S^0| = 2, |S^1| = 2*pi, |S^2| = 4*pi, ...).
double sphere_surface(int d);

/// K_nu(t) = \int_0^inf exp(-t cosh z) cosh(nu z) dz, t > 0.
/// Composite Gauss-Legendre panels in z on [0, B], with B solved from the
/// tolerance unless cfg.truncation_bound pins it.
double modified_bessel_k(double nu, double t, const QuadratureConfig& cfg = {});

/// e^t K_nu(t); stays on scale for arbitrarily large t.
double modified_bessel_k_scaled(double nu, double t, const QuadratureConfig& cfg = {});

/// phi(r): e^r + e^{-r} for N = 1, the sphere integral of e^{x.w}
/// reduced to |S^{N-2}| \int_0^pi e^{r cos a} sin^{N-2}a da for N >= 2.
double phi_radial(int N, double r, const QuadratureConfig& cfg = {});

/// e^{-r} phi(r); bounded for all r, used in the on-cone functional weights.
double phi_radial_scaled(int N, double r, const QuadratureConfig& cfg = {});

/// rho(t) = (1+t)^{(mu+1)/2} K_{(mu-1)/2}(1+t).
double rho(double mu, double t, const QuadratureConfig& cfg = {});

/// e^{1+t} rho(t).
double rho_scaled(double mu, double t, const QuadratureConfig& cfg = {});

/// rho'/rho = mu/(1+t) - K_{(mu+1)/2}(1+t) / K_{(mu-1)/2}(1+t).
double rho_log_deriv(double mu, double t, const QuadratureConfig& cfg = {});

/// Gamma(t) = mu/(1+t) - 2 rho'/rho; tends to 2 as t -> inf.
double gamma_coeff(double mu, double t, const QuadratureConfig& cfg = {});

/// psi(r, t) = rho(t) phi(r).
double psi(double mu, int N, double r, double t, const QuadratureConfig& cfg = {});

/// m(t) = (1+t)^mu.
double multiplier_m(double mu, double t);

/// First time (located on a scan grid) after which both
/// Gamma(mu, t) > 0 and 1/4 - 3 Gamma(mu, t)/32 > 0 hold for good.
double gamma_window_start(double mu, const QuadratureConfig& cfg = {});

}  // namespace siwave
