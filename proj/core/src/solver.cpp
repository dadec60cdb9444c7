#include "siwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "siwave/errors.hpp"
#include "siwave/functionals.hpp"
#include "siwave/specfun.hpp"

namespace siwave {

namespace {

inline double pow_abs(double x, double p) {
    if (p == 2.0) return x * x;
    return std::pow(std::abs(x), p);
}

// radial Laplacian u_rr + (N-1)/r u_r; at r = 0 symmetry gives N u_rr
void laplacian(const std::vector<double>& u, double h, int N, std::vector<double>& out) {
    const std::size_t n = u.size();
    const double ih2 = 1.0 / (h * h);
    out[0] = 2.0 * N * (u[1] - u[0]) * ih2;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double r = h * static_cast<double>(j);
        out[j] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * ih2 +
                 (N - 1) * (u[j + 1] - u[j - 1]) / (2.0 * h * r);
    }
    out[n - 1] = 0.0;
}

double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(const std::vector<double>& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

void GridConfig::validate() const {
    if (!(h > 0.0)) throw config_error("GridConfig: h must be positive");
    if (!(cfl > 0.0) || cfl > 1.0) throw config_error("GridConfig: cfl must be in (0, 1]");
    if (!(dt_min > 0.0)) throw config_error("GridConfig: dt_min must be positive");
    if (!(blowup_threshold > 0.0)) throw config_error("GridConfig: blowup_threshold must be positive");
    if (!(sampling_dt > 0.0)) throw config_error("GridConfig: sampling_dt must be positive");
    if (margin_cells < 4) throw config_error("GridConfig: margin_cells must be >= 4");
}

std::string to_string(RunStatus status) {
    return status == RunStatus::blew_up ? "blew_up" : "censored";
}

RunStatus run_status_from_string(const std::string& s) {
    if (s == "blew_up") return RunStatus::blew_up;
    if (s == "censored") return RunStatus::censored;
    throw std::domain_error("unknown run status: " + s);
}

double bump_profile(double r, double R) {
    if (r >= R) return 0.0;
    return std::exp(-R * R / (R * R - r * r));
}

InitialData build_initial_data(const ModelParams& params, const RadialGrid& grid) {
    params.validate();
    if (params.R / grid.h < 32.0)
        throw config_error("build_initial_data: grid must resolve R with >= 32 cells");
    if (params.f1_scale == 0.0 && params.f2_scale == 0.0 && params.g1_scale == 0.0 &&
        params.g2_scale == 0.0)
        throw data_admissibility_error("build_initial_data: data must not vanish everywhere");

    InitialData data;
    const std::size_t n = grid.nodes();
    data.f1.resize(n);
    data.f2.resize(n);
    data.g1.resize(n);
    data.g2.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double b = bump_profile(grid.r(j), params.R);
        data.f1[j] = params.f1_scale * b;
        data.f2[j] = params.f2_scale * b;
        data.g1[j] = params.g1_scale * b;
        data.g2[j] = params.g2_scale * b;
    }
    return data;
}

RadialState make_initial_state(const ModelParams& params, const RadialGrid& grid,
                               const InitialData& data) {
    RadialState st;
    st.h = grid.h;
    st.t = 0.0;
    st.dt = 0.0;
    const std::size_t n = grid.nodes();
    st.u.resize(n);
    st.v.resize(n);
    st.ut.resize(n);
    st.vt.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        st.u[j] = params.eps * data.f1[j];
        st.v[j] = params.eps * data.f2[j];
        st.ut[j] = params.eps * data.g1[j];
        st.vt[j] = params.eps * data.g2[j];
    }
    return st;
}

void advance(RadialState& state, const ModelParams& params, const Forcing* forcing) {
    const std::size_t n = state.nodes();
    const double dt = state.dt;
    const double t0 = state.t, t1 = state.t + dt;
    const int N = params.N;
    const double p = params.pq.p, q = params.pq.q;
    const bool nl = params.nonlinearity_on;

    static thread_local std::vector<double> lap_u, lap_v, au, av, utp, vtp;
    lap_u.assign(n, 0.0);
    lap_v.assign(n, 0.0);
    au.assign(n, 0.0);
    av.assign(n, 0.0);
    utp.assign(n, 0.0);
    vtp.assign(n, 0.0);

    laplacian(state.u, state.h, N, lap_u);
    laplacian(state.v, state.h, N, lap_v);
    const double b1_0 = params.mu1.coefficient(t0);
    const double b2_0 = params.mu2.coefficient(t0);

    for (std::size_t j = 0; j < n; ++j) {
        const double r = state.h * static_cast<double>(j);
        double su = nl ? pow_abs(state.vt[j], p) : 0.0;
        double sv = nl ? pow_abs(state.ut[j], q) : 0.0;
        if (forcing) {
            if (forcing->on_u) su += forcing->on_u(r, t0);
            if (forcing->on_v) sv += forcing->on_v(r, t0);
        }
        au[j] = lap_u[j] + su - b1_0 * state.ut[j];
        av[j] = lap_v[j] + sv - b2_0 * state.vt[j];
    }

    // position update and explicit velocity predictor
    for (std::size_t j = 0; j + 1 < n; ++j) {
        state.u[j] += dt * state.ut[j] + 0.5 * dt * dt * au[j];
        state.v[j] += dt * state.vt[j] + 0.5 * dt * dt * av[j];
        utp[j] = state.ut[j] + dt * au[j];
        vtp[j] = state.vt[j] + dt * av[j];
    }
    state.u[n - 1] = 0.0;
    state.v[n - 1] = 0.0;

    laplacian(state.u, state.h, N, lap_u);
    laplacian(state.v, state.h, N, lap_v);
    const double b1_1 = params.mu1.coefficient(t1);
    const double b2_1 = params.mu2.coefficient(t1);

    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double r = state.h * static_cast<double>(j);
        double su = nl ? pow_abs(vtp[j], p) : 0.0;
        double sv = nl ? pow_abs(utp[j], q) : 0.0;
        if (forcing) {
            if (forcing->on_u) su += forcing->on_u(r, t1);
            if (forcing->on_v) sv += forcing->on_v(r, t1);
        }
        state.ut[j] = (state.ut[j] + 0.5 * dt * (au[j] + lap_u[j] + su)) /
                      (1.0 + 0.5 * dt * b1_1);
        state.vt[j] = (state.vt[j] + 0.5 * dt * (av[j] + lap_v[j] + sv)) /
                      (1.0 + 0.5 * dt * b2_1);
    }
    state.ut[n - 1] = 0.0;
    state.vt[n - 1] = 0.0;
    state.t = t1;

    if (!all_finite(state.ut) || !all_finite(state.vt) || !all_finite(state.u) ||
        !all_finite(state.v))
        state.blown_up = true;
}

double stable_dt(const RadialState& state, const ModelParams& params, const GridConfig& cfg) {
    double dt = cfg.cfl * cfg.h;
    if (params.nonlinearity_on) {
        const double M = std::max(max_abs(state.ut), max_abs(state.vt));
        const double theta = std::max(params.pq.p, params.pq.q) - 1.0;
        dt = std::min(dt, cfg.adapt_c / (1.0 + std::pow(M, theta)));
    }
    return dt;
}

bool check_support_cone(const RadialState& state, double R, double floor) {
    const std::size_t n = state.nodes();
    const double edge = state.t + R + 2.0 * state.h;
    std::size_t j0 = static_cast<std::size_t>(std::ceil(edge / state.h)) + 1;
    for (std::size_t j = j0; j < n; ++j)
        if (std::abs(state.u[j]) >= floor || std::abs(state.v[j]) >= floor) return false;
    return true;
}

double wave_energy(const RadialState& state, int N) {
    const std::size_t n = state.nodes();
    const double h = state.h;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double ur, vr;
        if (j == 0) {
            ur = 0.0;  // symmetry
            vr = 0.0;
        } else if (j + 1 == n) {
            ur = (state.u[j] - state.u[j - 1]) / h;
            vr = (state.v[j] - state.v[j - 1]) / h;
        } else {
            ur = (state.u[j + 1] - state.u[j - 1]) / (2.0 * h);
            vr = (state.v[j + 1] - state.v[j - 1]) / (2.0 * h);
        }
        const double density = state.ut[j] * state.ut[j] + ur * ur + state.vt[j] * state.vt[j] +
                               vr * vr;
        const double rw = N == 1 ? 1.0 : std::pow(h * static_cast<double>(j), N - 1);
        const double tw = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
        acc += density * rw * tw;
    }
    return acc * h * sphere_surface(N - 1);
}

RunOutcome run_until_blowup(const ModelParams& params, double horizon, const GridConfig& grid_cfg,
                            const QuadratureConfig& quad, const Forcing* forcing) {
    params.validate();
    grid_cfg.validate();
    if (!(horizon > 0.0)) throw config_error("run_until_blowup: horizon must be positive");

    const double needed = horizon + params.R + grid_cfg.margin_cells * grid_cfg.h;
    double r_max = grid_cfg.r_max > 0.0 ? grid_cfg.r_max : needed;
    if (r_max + 1e-12 < horizon + params.R + 4.0 * grid_cfg.h)
        throw config_error("run_until_blowup: domain too small, the cone exits it "
                           "(need r_max >= horizon + R + 4h)");

    RadialGrid grid;
    grid.h = grid_cfg.h;
    grid.cells = static_cast<std::size_t>(std::ceil(r_max / grid_cfg.h));

    const InitialData data = build_initial_data(params, grid);
    RadialState state = make_initial_state(params, grid, data);
    FunctionalEvaluator eval(params, grid, quad);

    RunOutcome outcome;
    outcome.horizon = horizon;
    outcome.series.Cfg1 = eval.Cfg_constant(data, 1);
    outcome.series.Cfg2 = eval.Cfg_constant(data, 2);
    outcome.If1 = eval.profile_phi_integral(data.f1);
    outcome.If2 = eval.profile_phi_integral(data.f2);
    outcome.Ig1 = eval.profile_phi_integral(data.g1);
    outcome.Ig2 = eval.profile_phi_integral(data.g2);

    eval.sample(state, outcome.series);
    double next_sample = grid_cfg.sampling_dt;

    while (true) {
        const double mu_abs = max_abs(state.ut);
        const double mv_abs = max_abs(state.vt);
        const double M = std::max(mu_abs, mv_abs);
        outcome.peak_ut = std::max(outcome.peak_ut, mu_abs);
        outcome.peak_vt = std::max(outcome.peak_vt, mv_abs);

        if (M >= grid_cfg.blowup_threshold || state.blown_up) {
            outcome.status = RunStatus::blew_up;
            outcome.T_blowup = state.t;
            break;
        }
        if (state.t >= horizon - 1e-9) {
            outcome.status = RunStatus::censored;
            break;
        }
        double dt = stable_dt(state, params, grid_cfg);
        if (dt < grid_cfg.dt_min) {
            outcome.status = RunStatus::blew_up;
            outcome.T_blowup = state.t;
            break;
        }
        dt = std::min(dt, horizon - state.t);
        state.dt = dt;
        advance(state, params, forcing);

        if (!state.blown_up && state.t >= next_sample) {
            eval.sample(state, outcome.series);
            // floor relative to the current field sup: the dispersive front
            // smearing of a second-order stencil reaches a few percent of it
            // by t of a few hundred, so the check targets gross violations
            const double field_sup = std::max({max_abs(state.u), max_abs(state.v), 1e-300});
            if (!check_support_cone(state, params.R, grid_cfg.cone_floor * field_sup))
                outcome.cone_ok = false;
            while (next_sample <= state.t) next_sample += grid_cfg.sampling_dt;
        }
    }

    const double window_end =
        outcome.status == RunStatus::blew_up ? 0.9 * outcome.T_blowup : horizon;
    finalize_series(outcome.series, params, window_end, quad);
    return outcome;
}

}  // namespace siwave
