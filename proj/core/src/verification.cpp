#include "siwave/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "json.hpp"
#include "siwave/errors.hpp"
#include "siwave/ioutil.hpp"
#include "siwave/specfun.hpp"

namespace siwave {

using nlohmann::json;

std::string to_string(CheckStatus status) {
    switch (status) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

void write_checks_json(const std::filesystem::path& file, std::span<const CheckReport> reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        json j;
        j["check_name"] = r.name;
        j["status"] = to_string(r.status);
        j["margin"] = r.margin;
        j["sample_grid"] = r.sample_grid;
        j["tolerances"] = r.tolerances;
        arr.push_back(j);
    }
    write_text_file(file, arr.dump(2) + "\n");
}

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

constexpr double kResidualTol = 1e-3;  // relative FD residual ceiling at the finer mesh
constexpr double kOrderFloor = 1.9;

// max relative residual of the rho ODE at spacing h over the grid
double rho_ode_residual(double mu, std::span<const double> t_grid, double h,
                        const QuadratureConfig& quad, const Defect& defect) {
    auto r = [&](double t) {
        const double base = rho(mu, t, quad);
        return defect ? base * defect(t) : base;
    };
    double worst = 0.0;
    for (double t : t_grid) {
        if (t - h < 0.0) continue;
        const double rm = r(t - h), r0 = r(t), rp = r(t + h);
        const double d2 = (rp - 2.0 * r0 + rm) / (h * h);
        const double gm = mu * rm / (1.0 + t - h), gp = mu * rp / (1.0 + t + h);
        const double dg = (gp - gm) / (2.0 * h);
        worst = std::max(worst, std::abs(d2 - r0 - dg) / std::max(std::abs(r0), 1e-300));
    }
    return worst;
}

CheckReport convergence_report(std::string name, double res_coarse, double res_fine,
                               std::string grid_desc) {
    CheckReport rep;
    rep.name = std::move(name);
    rep.sample_grid = std::move(grid_desc);
    const double order = std::log2(res_coarse / res_fine);
    const double margin_order = order - kOrderFloor;
    const double margin_res = (kResidualTol - res_fine) / kResidualTol;
    rep.margin = std::min(margin_order, margin_res);
    rep.status = rep.margin >= 0.0 ? CheckStatus::pass : CheckStatus::fail;
    rep.tolerances = fmt("order >= %.2f, fine residual <= %.1e; observed order %.3f",
                         kOrderFloor, kResidualTol, order);
    return rep;
}

}  // namespace

CheckReport check_rho_ode(double mu, std::span<const double> t_grid, const QuadratureConfig& quad,
                          const Defect& defect) {
    const double h1 = 0.04, h2 = 0.02;
    const double r1 = rho_ode_residual(mu, t_grid, h1, quad, defect);
    const double r2 = rho_ode_residual(mu, t_grid, h2, quad, defect);
    return convergence_report(fmt("rho_ode[mu=%g]", mu), r1, r2,
                              fmt("t grid of %g points, fd steps 0.04/0.02",
                                  static_cast<double>(t_grid.size())));
}

namespace {

double phi_eigen_residual(int N, double r_hi, std::size_t cells, const QuadratureConfig& quad,
                          const Defect& defect) {
    const double h = r_hi / static_cast<double>(cells);
    std::vector<double> phi(cells + 1);
    for (std::size_t j = 0; j <= cells; ++j) {
        const double r = h * static_cast<double>(j);
        phi[j] = phi_radial(N, r, quad) * (defect ? defect(r) : 1.0);
    }
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < cells; ++j) {
        double lap;
        if (j == 0) {
            lap = 2.0 * N * (phi[1] - phi[0]) / (h * h);
        } else {
            const double r = h * static_cast<double>(j);
            lap = (phi[j + 1] - 2.0 * phi[j] + phi[j - 1]) / (h * h) +
                  (N - 1) * (phi[j + 1] - phi[j - 1]) / (2.0 * h * r);
        }
        worst = std::max(worst, std::abs(lap - phi[j]) / phi[j]);
    }
    return worst;
}

}  // namespace

CheckReport check_phi_eigen(int N, double r_hi, const QuadratureConfig& quad,
                            const Defect& defect) {
    const double r1 = phi_eigen_residual(N, r_hi, 256, quad, defect);
    const double r2 = phi_eigen_residual(N, r_hi, 512, quad, defect);
    return convergence_report(fmt("phi_eigen[N=%g]", static_cast<double>(N)), r1, r2,
                              fmt("r in [0, %g], 256/512 cells", r_hi));
}

namespace {

double psi_conjugate_residual(double mu, int N, std::size_t cells, const QuadratureConfig& quad,
                              double damping_sign) {
    // r in [0, 4], t in [0.5, 3.5]; the t = 0 boundary stays out of the grid
    const double r_hi = 4.0, t_lo = 0.5, t_hi = 3.5;
    const double hr = r_hi / static_cast<double>(cells);
    const double ht = (t_hi - t_lo) / static_cast<double>(cells);
    std::vector<double> phi(cells + 1), rh(cells + 1), g(cells + 1);
    for (std::size_t j = 0; j <= cells; ++j) phi[j] = phi_radial(N, hr * j, quad);
    for (std::size_t k = 0; k <= cells; ++k) {
        const double t = t_lo + ht * k;
        rh[k] = rho(mu, t, quad);
        g[k] = damping_sign * mu * rh[k] / (1.0 + t);
    }
    double worst = 0.0;
    for (std::size_t k = 1; k < cells; ++k) {
        const double d2rho = (rh[k + 1] - 2.0 * rh[k] + rh[k - 1]) / (ht * ht);
        const double dg = (g[k + 1] - g[k - 1]) / (2.0 * ht);
        for (std::size_t j = 0; j + 1 < cells; ++j) {
            double lap;
            if (j == 0) {
                lap = 2.0 * N * (phi[1] - phi[0]) / (hr * hr);
            } else {
                lap = (phi[j + 1] - 2.0 * phi[j] + phi[j - 1]) / (hr * hr) +
                      (N - 1) * (phi[j + 1] - phi[j - 1]) / (2.0 * hr * hr * j);
            }
            const double res = phi[j] * d2rho - rh[k] * lap - phi[j] * dg;
            worst = std::max(worst, std::abs(res) / (rh[k] * phi[j]));
        }
    }
    return worst;
}

}  // namespace

CheckReport check_psi_conjugate(double mu, int N, const QuadratureConfig& quad,
                                double damping_sign) {
    const double r1 = psi_conjugate_residual(mu, N, 64, quad, damping_sign);
    const double r2 = psi_conjugate_residual(mu, N, 128, quad, damping_sign);
    return convergence_report(fmt("psi_conjugate[mu=%g,N=%g]", mu, static_cast<double>(N)), r1,
                              r2, "r in [0,4] x t in [0.5,3.5], 64/128 cells each, joint halving");
}

CheckReport check_lemma31(double mu, int N, double r_exponent, double R,
                          const QuadratureConfig& quad) {
    if (!(r_exponent > 1.0))
        throw std::domain_error("check_lemma31: exponent must exceed 1");
    auto sup_ratio = [&](std::size_t points) {
        double sup = 0.0;
        for (double t = 0.5; t <= 30.0 + 1e-9; t += 0.5) {
            const double lhs = psi_power_integral(mu, N, r_exponent, t, R, quad, points);
            const double rb = rho_scaled(mu, t, quad);
            const double shape = std::pow(rb, r_exponent) * std::exp(-r_exponent) *
                                 std::pow(1.0 + t, 0.5 * (2.0 - r_exponent) * (N - 1));
            sup = std::max(sup, lhs / shape);
        }
        return sup;
    };
    const double s1 = sup_ratio(2048);
    const double s2 = sup_ratio(4096);
    const double drift = std::abs(s1 - s2) / std::max(s1, 1e-300);

    CheckReport rep;
    rep.name = fmt("lemma31[mu=%g,N=%g,r=%g]", mu, static_cast<double>(N), r_exponent);
    rep.sample_grid = "t in [0.5, 30] step 0.5; 2048/4096 radial points";
    rep.margin = (0.1 - drift) / 0.1;
    rep.status = std::isfinite(s1) && std::isfinite(s2) && rep.margin >= 0.0 ? CheckStatus::pass
                                                                             : CheckStatus::fail;
    rep.tolerances = fmt("sup ratio %.6g, refinement drift %.2e <= 0.1", s1, drift);
    return rep;
}

CheckReport check_asymptotics(std::span<const double> nu_list, std::span<const double> mu_list,
                              const QuadratureConfig& quad) {
    double margin = std::numeric_limits<double>::infinity();
    for (double t = 10.0; t <= 200.0 + 1e-9; t += 5.0) {
        const double band = 5.0 / t;
        for (double nu : nu_list) {
            const double ratio =
                modified_bessel_k_scaled(nu, t, quad) * std::sqrt(2.0 * t / M_PI);
            margin = std::min(margin, (band - std::abs(ratio - 1.0)) / band);
        }
        for (double mu : mu_list) {
            const double rld = rho_log_deriv(mu, t, quad);
            margin = std::min(margin, (band - std::abs(rld + 1.0)) / band);
        }
    }
    CheckReport rep;
    rep.name = "asymptotics";
    rep.sample_grid = "t in [10, 200] step 5";
    rep.margin = margin;
    rep.status = margin >= 0.0 ? CheckStatus::pass : CheckStatus::fail;
    rep.tolerances = "|K_nu sqrt(2t/pi)e^t - 1| <= 5/t and |rho'/rho + 1| <= 5/t";
    return rep;
}

// ---------------------------------------------------------------------------
// run-dependent checks

namespace {

// cached e^{-x} phi(x) on a uniform grid, for the cone integrals along a run
struct PhiBarTable {
    double dx = 0.0;
    std::vector<double> val;
};

PhiBarTable build_phi_bar_table(int N, double r_hi, const QuadratureConfig& quad) {
    PhiBarTable tab;
    tab.dx = 0.02;
    const std::size_t n = static_cast<std::size_t>(std::ceil(r_hi / tab.dx)) + 1;
    tab.val.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        tab.val[j] = phi_radial_scaled(N, tab.dx * static_cast<double>(j), quad);
    return tab;
}

// |S^{N-1}| \int_0^{t+R} phi_bar(x) e^{x-t-1} x^{N-1} dx from the table
double cone_weight_integral(const PhiBarTable& tab, int N, double t, double R) {
    const double upper = t + R;
    const std::size_t j_max =
        std::min(tab.val.size() - 1, static_cast<std::size_t>(std::floor(upper / tab.dx)));
    double acc = 0.0;
    for (std::size_t j = 0; j <= j_max; ++j) {
        const double x = tab.dx * static_cast<double>(j);
        const double w = (j == 0 || j == j_max) ? 0.5 : 1.0;
        acc += tab.val[j] * std::exp(x - t - 1.0) * (N == 1 ? 1.0 : std::pow(x, N - 1)) * w;
    }
    return acc * tab.dx * sphere_surface(N - 1);
}

}  // namespace

CheckReport check_F_bounds(const RunRecord& rec) {
    const SlackModel slack;
    const double allowance = slack(rec.h);
    const double eps = rec.params.eps;
    const double mu1 = rec.params.mu1.mu, mu2 = rec.params.mu2.mu;
    double margin = std::numeric_limits<double>::infinity();
    const auto& s = rec.series;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double m1 = std::pow(1.0 + s.t[i], -mu1), m2 = std::pow(1.0 + s.t[i], -mu2);
        const struct {
            double lhs, rhs;
        } rows[4] = {
            {s.F1[i], 0.5 * eps * m1 * rec.If1},
            {s.F2[i], 0.5 * eps * m2 * rec.If2},
            {s.Ft1[i], 0.5 * eps * m1 * rec.Ig1},
            {s.Ft2[i], 0.5 * eps * m2 * rec.Ig2},
        };
        for (const auto& row : rows) {
            const double scale = std::max({std::abs(row.lhs), std::abs(row.rhs), 1e-300});
            margin = std::min(margin, (row.lhs - row.rhs) / scale);
        }
    }
    CheckReport rep;
    rep.name = "F_bounds";
    rep.sample_grid = fmt("%g samples over the recorded run", static_cast<double>(s.size()));
    rep.margin = margin;
    rep.status = margin >= -allowance ? CheckStatus::pass : CheckStatus::fail;
    rep.tolerances = fmt("slack %.3e (rel 1e-9 + 16 h^2)", allowance);
    return rep;
}

CheckReport check_G_coercivity(const RunRecord& rec) {
    const auto& s = rec.series;
    CheckReport rep;
    rep.name = "G_coercivity";
    rep.sample_grid =
        fmt("window [first passage, %.6g]; T0_emp=%.6g T1_emp=%.6g", rec.window_end, s.T0_emp,
            s.T1_emp);
    if (!std::isfinite(s.T0_emp) || !std::isfinite(s.T1_emp)) {
        rep.status = CheckStatus::fail;
        rep.margin = -1.0;
        rep.tolerances = "no first-passage time located";
        return rep;
    }
    rep.margin = std::min({s.C_G1, s.C_G2, s.C_Gt1, s.C_Gt2});
    rep.status = rep.margin > 0.0 ? CheckStatus::pass : CheckStatus::fail;
    char buf[160];
    std::snprintf(buf, sizeof buf, "floors C_G=(%.4g, %.4g), C_Gt=(%.4g, %.4g) must be positive",
                  s.C_G1, s.C_G2, s.C_Gt1, s.C_Gt2);
    rep.tolerances = buf;
    return rep;
}

CheckReport check_L_domination(const RunRecord& rec) {
    const SlackModel slack;
    const double allowance = slack(rec.h);
    const auto& s = rec.series;
    CheckReport rep;
    rep.name = "L_domination";
    if (!std::isfinite(s.T2_emp)) {
        rep.status = CheckStatus::inconclusive;
        rep.margin = 0.0;
        rep.tolerances = "run too short to open the T2 window";
        return rep;
    }
    const double base = s.C6 * rec.params.eps / 8.0;
    double margin = std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.t[i] < s.T2_emp || s.t[i] > rec.window_end) continue;
        ++used;
        const double scale1 = std::max({std::abs(s.L1[i]), base, 1e-300});
        const double scale2 = std::max({std::abs(s.L2[i]), base, 1e-300});
        margin = std::min(margin, (s.Gt1[i] - s.L1[i]) / scale1);
        margin = std::min(margin, (s.Gt2[i] - s.L2[i]) / scale2);
    }
    rep.sample_grid = fmt("%g samples in [T2=%.6g, %.6g]", static_cast<double>(used), s.T2_emp,
                          rec.window_end);
    if (used == 0) {
        rep.status = CheckStatus::inconclusive;
        rep.margin = 0.0;
        rep.tolerances = "empty T2 window";
        return rep;
    }
    rep.margin = margin;
    rep.status = margin >= -allowance ? CheckStatus::pass : CheckStatus::fail;
    rep.tolerances = fmt("slack %.3e", allowance);
    return rep;
}

CheckReport check_holder_bound(const RunRecord& rec, const QuadratureConfig& quad) {
    const SlackModel slack;
    const double allowance = slack(rec.h) + 0.05;  // midpoint reconstruction of 8 dL/dt
    const auto& s = rec.series;
    CheckReport rep;
    rep.name = "holder_bound";
    if (!std::isfinite(s.T2_emp)) {
        rep.status = CheckStatus::inconclusive;
        rep.margin = 0.0;
        rep.tolerances = "run too short to open the T2 window";
        return rep;
    }
    const int N = rec.params.N;
    const double R = rec.params.R;
    const double p = rec.params.pq.p, q = rec.params.pq.q;
    const double mu1 = rec.params.mu1.mu, mu2 = rec.params.mu2.mu;
    const PhiBarTable tab = build_phi_bar_table(N, rec.window_end + R + 1.0, quad);

    double margin = std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s.t[i] < s.T2_emp || s.t[i + 1] > rec.window_end) continue;
        const double dt = s.t[i + 1] - s.t[i];
        if (!(dt > 0.0)) continue;
        const double tm = 0.5 * (s.t[i] + s.t[i + 1]);
        const double base = cone_weight_integral(tab, N, tm, R);

        // direction 1: \int |v_t|^p psi_1 >= Gt2^p Psi^-(p-1)
        {
            const double lhs = 8.0 * (s.L1[i + 1] - s.L1[i]) / dt;
            const double gt_mid = 0.5 * (s.Gt2[i] + s.Gt2[i + 1]);
            const double psi_mix = std::pow(rho_scaled(mu2, tm, quad), p / (p - 1.0)) *
                                   std::pow(rho_scaled(mu1, tm, quad), -1.0 / (p - 1.0)) * base;
            const double rhs = std::pow(gt_mid, p) * std::pow(psi_mix, -(p - 1.0));
            const double scale = std::max({lhs, rhs, 1e-300});
            margin = std::min(margin, (lhs - rhs) / scale);
        }
        // direction 2: \int |u_t|^q psi_2 >= Gt1^q Psi^-(q-1)
        {
            const double lhs = 8.0 * (s.L2[i + 1] - s.L2[i]) / dt;
            const double gt_mid = 0.5 * (s.Gt1[i] + s.Gt1[i + 1]);
            const double psi_mix = std::pow(rho_scaled(mu1, tm, quad), q / (q - 1.0)) *
                                   std::pow(rho_scaled(mu2, tm, quad), -1.0 / (q - 1.0)) * base;
            const double rhs = std::pow(gt_mid, q) * std::pow(psi_mix, -(q - 1.0));
            const double scale = std::max({lhs, rhs, 1e-300});
            margin = std::min(margin, (lhs - rhs) / scale);
        }
        ++used;
    }
    rep.sample_grid = fmt("%g sample intervals in [T2=%.6g, %.6g]", static_cast<double>(used),
                          s.T2_emp, rec.window_end);
    if (used == 0) {
        rep.status = CheckStatus::inconclusive;
        rep.margin = 0.0;
        rep.tolerances = "empty T2 window";
        return rep;
    }
    rep.margin = margin;
    rep.status = margin >= -allowance ? CheckStatus::pass : CheckStatus::fail;
    rep.tolerances = fmt("slack %.3e (includes interval-average reconstruction)", allowance);
    return rep;
}

std::vector<CheckReport> run_default_suite(const QuadratureConfig& quad) {
    std::vector<CheckReport> out;
    const double mus[] = {0.5, 1.0, 2.0, 3.0};
    const int Ns[] = {1, 2, 3};
    std::vector<double> t_grid;
    for (double t = 0.25; t <= 20.0 + 1e-9; t += 0.25) t_grid.push_back(t);

    for (double mu : mus) out.push_back(check_rho_ode(mu, t_grid, quad));
    for (int N : Ns) out.push_back(check_phi_eigen(N, 8.0, quad));
    for (double mu : mus)
        for (int N : Ns) out.push_back(check_psi_conjugate(mu, N, quad));
    out.push_back(check_lemma31(1.0, 2, 2.0, 1.0, quad));
    out.push_back(check_lemma31(0.5, 1, 1.5, 1.0, quad));
    const double nus[] = {0.0, 0.25, -0.25, 0.5, 1.0};
    out.push_back(check_asymptotics(nus, mus, quad));
    return out;
}

std::vector<CheckReport> run_record_suite(const RunRecord& rec, const QuadratureConfig& quad) {
    return {check_F_bounds(rec), check_G_coercivity(rec), check_L_domination(rec),
            check_holder_bound(rec, quad)};
}

}  // namespace siwave
