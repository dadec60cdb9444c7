#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "siwave/functional_series.hpp"
#include "siwave/model.hpp"
#include "siwave/quadrature.hpp"

namespace siwave {

struct RadialGrid {
    double h = 0.025;
    std::size_t cells = 0;  // intervals; node count is cells + 1

    double r(std::size_t j) const { return h * static_cast<double>(j); }
    double r_max() const { return h * static_cast<double>(cells); }
    std::size_t nodes() const { return cells + 1; }
};

/// Numerical knobs of a run.  r_max = 0 derives the domain from the
/// horizon so the Dirichlet boundary sits beyond the light cone.
struct GridConfig {
    double h = 0.025;
    double cfl = 0.5;
    double dt_min = 1e-10;
    double adapt_c = 0.2;          // dt cap constant against the nonlinear runaway
    double blowup_threshold = 1e6;
    double sampling_dt = 0.5;
    double cone_floor = 0.1;       // support floor relative to the field sup
    int margin_cells = 8;
    double r_max = 0.0;

    void validate() const;
};

/// Unscaled radial data profiles on the grid (state data is eps * profile).
struct InitialData {
    std::vector<double> f1, f2, g1, g2;
};

struct RadialState {
    double h = 0.0;
    double t = 0.0;
    double dt = 0.0;
    std::vector<double> u, v, ut, vt;
    bool blown_up = false;

    std::size_t nodes() const { return u.size(); }
};

enum class RunStatus { blew_up, censored };
std::string to_string(RunStatus status);
RunStatus run_status_from_string(const std::string& s);

struct RunOutcome {
    RunStatus status = RunStatus::censored;
    double T_blowup = 0.0;  // meaningful only when blew_up
    double horizon = 0.0;
    double peak_ut = 0.0;
    double peak_vt = 0.0;
    bool cone_ok = true;
    FunctionalSeries series;
    double If1 = 0.0, If2 = 0.0, Ig1 = 0.0, Ig2 = 0.0;  // \int profile * phi dx
};

/// Optional source terms (manufactured-solution studies).
struct Forcing {
    std::function<double(double r, double t)> on_u;
    std::function<double(double r, double t)> on_v;
};

/// The C-infinity bump exp(-R^2/(R^2 - r^2)) for r < R, zero outside.
double bump_profile(double r, double R);

InitialData build_initial_data(const ModelParams& params, const RadialGrid& grid);

/// State at t = 0 for the given data: (u, v, u_t, v_t) = eps (f1, f2, g1, g2).
RadialState make_initial_state(const ModelParams& params, const RadialGrid& grid,
                               const InitialData& data);

/// One step of size state.dt: velocity-Verlet position update, trapezoidal
/// velocity update with the damping term taken implicitly and the coupling
/// nonlinearity on an explicit predictor.  Non-finite values set the
/// blow-up flag instead of raising.
void advance(RadialState& state, const ModelParams& params, const Forcing* forcing = nullptr);

/// Step size respecting the CFL bound and the nonlinear growth cap.
double stable_dt(const RadialState& state, const ModelParams& params, const GridConfig& cfg);

/// True iff |u|, |v| < floor for all r > t + R + 2h.
bool check_support_cone(const RadialState& state, double R, double floor);

/// \int (u_t^2 + u_r^2) dx over the radial domain (diagnostic).
double wave_energy(const RadialState& state, int N);

RunOutcome run_until_blowup(const ModelParams& params, double horizon, const GridConfig& grid_cfg,
                            const QuadratureConfig& quad = {}, const Forcing* forcing = nullptr);

}  // namespace siwave
