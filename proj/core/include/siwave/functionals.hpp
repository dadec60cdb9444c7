#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "siwave/functional_series.hpp"
#include "siwave/model.hpp"
#include "siwave/quadrature.hpp"
#include "siwave/solver.hpp"

namespace siwave {

/// Evaluates the blow-up functionals along a run.  All spatial quadrature
/// is composite trapezoid on the solver grid, restricted to the support
/// cone so the exponential weights stay on scale; phi is cached on the
/// grid at construction.
class FunctionalEvaluator {
public:
    FunctionalEvaluator(const ModelParams& params, const RadialGrid& grid,
                        QuadratureConfig quad = {});

    // which selects the component pair: 1 = (u, mu1), 2 = (v, mu2)
    double F(const RadialState& state, int which) const;
    double Ftilde(const RadialState& state, int which) const;
    double G(const RadialState& state, int which) const;
    double Gtilde(const RadialState& state, int which) const;

    /// \int |v_t|^p psi_1 dx (which = 1) or \int |u_t|^q psi_2 dx (which = 2).
    double nonlinear_integral(const RadialState& state, int which) const;

    /// C(f_i, g_i); throws data_admissibility_error when nonpositive.
    double Cfg_constant(const InitialData& data, int which) const;

    /// \int profile(x) phi(x) dx over the data support.
    double profile_phi_integral(std::span<const double> profile) const;

    /// Append one sampled row (functionals, nonlinear integrals, peaks).
    void sample(const RadialState& state, FunctionalSeries& series) const;

    const RadialGrid& grid() const { return grid_; }

private:
    double weighted_integral(std::span<const double> field, double t, double weight_scale,
                             double exp_shift) const;

    ModelParams params_;
    RadialGrid grid_;
    QuadratureConfig quad_;
    std::vector<double> phi_bar_;   // e^{-r} phi(r) on grid nodes
    std::vector<double> rufactor_;  // r^{N-1} trapezoid factors (half at j=0)
    double sphere_;
};

/// L_i accumulation from the recorded nonlinear integrals: L_i(T2) = C6 eps/8,
/// then the running trapezoid of nl_i/8.  T2 must satisfy the Gamma window
/// criteria for both damping coefficients (config error otherwise).
void accumulate_L(FunctionalSeries& series, const ModelParams& params, double T2,
                  const QuadratureConfig& quad = {});

/// Post-run pass: locates T0/T1/T2 empirically, fits the coercivity floors,
/// forms C6 and fills the L columns.  window_end bounds the scan (0.9 T_blowup
/// for blow-up runs, the horizon otherwise).
void finalize_series(FunctionalSeries& series, const ModelParams& params, double window_end,
                     const QuadratureConfig& quad = {});

/// \int_{|x| <= t+R} psi^r dx (Lemma 3.1 left side), composite trapezoid
/// with `points` nodes (0 = automatic).
double psi_power_integral(double mu, int N, double r_exponent, double t, double R,
                          const QuadratureConfig& quad = {}, std::size_t points = 0);

/// \int_{|x| <= t+R} psi_a^{e/(e-1)} psi_b^{-1/(e-1)} dx (the Hoelder weight).
double psi_mixed_integral(double mu_a, double mu_b, double e, int N, double t, double R,
                          const QuadratureConfig& quad = {}, std::size_t points = 0);

/// A recorded run as consumed by the run-dependent checkers: exactly the
/// content of series.csv + constants.json.
struct RunRecord {
    ModelParams params;
    FunctionalSeries series;
    RunStatus status = RunStatus::censored;
    double T_blowup = 0.0;
    double horizon = 0.0;
    double window_end = 0.0;
    double If1 = 0.0, If2 = 0.0, Ig1 = 0.0, Ig2 = 0.0;  // profile-phi integrals
    double h = 0.0;
};

void write_series_csv(const std::filesystem::path& file, const FunctionalSeries& series);
FunctionalSeries read_series_csv(const std::filesystem::path& file);
void write_constants_json(const std::filesystem::path& file, const RunRecord& record);
void write_outcome_json(const std::filesystem::path& file, const RunOutcome& outcome,
                        double eps);

/// Runs the solver and writes series.csv, constants.json, outcome.json.
RunRecord write_run(const std::filesystem::path& dir, const ModelParams& params, double horizon,
                    const GridConfig& grid_cfg, const QuadratureConfig& quad = {});

/// Loads series.csv + constants.json from a run directory.
RunRecord load_run(const std::filesystem::path& dir);

}  // namespace siwave
