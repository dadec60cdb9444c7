#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "siwave/functionals.hpp"
#include "siwave/quadrature.hpp"

namespace siwave {

enum class CheckStatus { pass, fail, inconclusive };
std::string to_string(CheckStatus status);

struct CheckReport {
    std::string name;
    CheckStatus status = CheckStatus::inconclusive;
    double margin = 0.0;      // worst-case slack, normalized; >= 0 means pass
    std::string sample_grid;  // what was sampled
    std::string tolerances;   // thresholds the verdict used
};

void write_checks_json(const std::filesystem::path& file, std::span<const CheckReport> reports);

/// Inequality slack: relative floor plus a discretization allowance.
struct SlackModel {
    double rel = 1e-9;
    double disc_coeff = 16.0;
    double operator()(double h) const { return rel + disc_coeff * h * h; }
};

/// Optional multiplicative defect for the planted-failure tests; a constant
/// factor would still solve the homogeneous equations, so the tests plant a
/// time-modulated one.
using Defect = std::function<double(double)>;

// -- closed-form checks (no PDE run required) -------------------------------

/// rho'' - rho - d/dt(mu rho / (1+t)) = 0: finite-difference residual with
/// h^2 convergence verified across one halving.
CheckReport check_rho_ode(double mu, std::span<const double> t_grid,
                          const QuadratureConfig& quad = {}, const Defect& defect = {});

/// Discrete radial Laplacian of phi matches phi at second order.
CheckReport check_phi_eigen(int N, double r_hi = 8.0, const QuadratureConfig& quad = {},
                            const Defect& defect = {});

/// psi solves the conjugate damped wave equation; joint (h, dt) refinement.
/// damping_sign = -1 plants the sign-flip defect.
CheckReport check_psi_conjugate(double mu, int N, const QuadratureConfig& quad = {},
                                double damping_sign = 1.0);

/// sup over t in [0.5, 30] of the Lemma 3.1 ratio is finite and stable
/// under doubling of the quadrature resolution.
CheckReport check_lemma31(double mu, int N, double r_exponent, double R = 1.0,
                          const QuadratureConfig& quad = {});

/// K_nu sqrt(2t/pi) e^t within 5/t of 1 on [10, 200]; rho'/rho within 5/t
/// of -1 on the same grid.
CheckReport check_asymptotics(std::span<const double> nu_list, std::span<const double> mu_list,
                              const QuadratureConfig& quad = {});

// -- run-dependent checks (series.csv + constants.json) ----------------------

CheckReport check_F_bounds(const RunRecord& rec);
CheckReport check_G_coercivity(const RunRecord& rec);
CheckReport check_L_domination(const RunRecord& rec);
CheckReport check_holder_bound(const RunRecord& rec, const QuadratureConfig& quad = {});

/// The full closed-form suite across mu in {0.5, 1, 2, 3}, N in {1, 2, 3}.
std::vector<CheckReport> run_default_suite(const QuadratureConfig& quad = {});

/// All run-dependent checks against one recorded run.
std::vector<CheckReport> run_record_suite(const RunRecord& rec, const QuadratureConfig& quad = {});

}  // namespace siwave
