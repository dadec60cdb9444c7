#include <cmath>

#include "doctest.h"
#include "siwave/functionals.hpp"
#include "siwave/ioutil.hpp"
#include "siwave/solver.hpp"
#include "siwave/specfun.hpp"
#include "siwave/verification.hpp"

using namespace siwave;

namespace {

std::vector<double> default_t_grid() {
    std::vector<double> g;
    for (double t = 0.25; t <= 20.0 + 1e-9; t += 0.25) g.push_back(t);
    return g;
}

RunRecord recorded_run(double eps, double f1 = 1.0, double g1 = 1.0) {
    ModelParams p;
    p.N = 1;
    p.mu1.mu = 0.5;
    p.mu2.mu = 0.5;
    p.pq = {2.0, 2.0};
    p.eps = eps;
    p.f1_scale = f1;
    p.g1_scale = g1;
    GridConfig g;
    g.h = 0.03125;
    g.sampling_dt = 0.25;
    const auto dir =
        std::filesystem::temp_directory_path() / ("siwave_check_run_" + std::to_string(eps));
    std::filesystem::remove_all(dir);
    write_run(dir, p, 40.0, g);
    return load_run(dir);
}

}  // namespace

TEST_SUITE_BEGIN("verification");

TEST_CASE("rho oscillator identity passes and a modulated defect fails") {
    const auto grid = default_t_grid();
    for (double mu : {0.5, 1.0}) {
        const CheckReport rep = check_rho_ode(mu, grid);
        CHECK(rep.status == CheckStatus::pass);
        CHECK(rep.margin >= 0.0);
    }
    const CheckReport bad = check_rho_ode(
        1.0, grid, {}, [](double t) { return 1.0 + 1e-3 * std::sin(3.0 * t); });
    CHECK(bad.status == CheckStatus::fail);
}

TEST_CASE("phi eigenfunction identity passes for N = 1, 2, 3") {
    for (int N : {1, 2, 3}) {
        const CheckReport rep = check_phi_eigen(N);
        CHECK(rep.status == CheckStatus::pass);
    }
    const CheckReport bad =
        check_phi_eigen(2, 8.0, {}, [](double r) { return 1.0 + 1e-3 * std::sin(5.0 * r); });
    CHECK(bad.status == CheckStatus::fail);
}

TEST_CASE("psi conjugate equation passes; a damping sign flip fails") {
    for (auto [mu, N] : std::vector<std::pair<double, int>>{{0.5, 1}, {1.0, 2}, {3.0, 3}}) {
        const CheckReport rep = check_psi_conjugate(mu, N);
        CHECK(rep.status == CheckStatus::pass);
    }
    const CheckReport bad = check_psi_conjugate(1.0, 1, {}, -1.0);
    CHECK(bad.status == CheckStatus::fail);
}

TEST_CASE("growth-cap ratio is bounded and refinement-stable") {
    CHECK(check_lemma31(1.0, 2, 2.0).status == CheckStatus::pass);
    CHECK(check_lemma31(0.5, 1, 1.5).status == CheckStatus::pass);
    CHECK_THROWS_AS(check_lemma31(1.0, 2, 1.0), std::domain_error);
}

TEST_CASE("asymptotic envelopes hold, with the half-integer order exact") {
    const std::vector<double> nus = {0.0, 0.25, -0.25, 0.5, 1.0};
    const std::vector<double> mus = {0.5, 1.0, 2.0, 3.0};
    const CheckReport rep = check_asymptotics(nus, mus);
    CHECK(rep.status == CheckStatus::pass);
    // order 1/2 is the exact boundary case of the envelope
    for (double t : {10.0, 50.0, 200.0})
        CHECK(modified_bessel_k_scaled(0.5, t) * std::sqrt(2.0 * t / M_PI) ==
              doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("recorded-run suite passes on a blow-up run") {
    const RunRecord rec = recorded_run(0.5);
    CHECK(check_F_bounds(rec).status == CheckStatus::pass);
    const CheckReport gc = check_G_coercivity(rec);
    CHECK(gc.status == CheckStatus::pass);
    CHECK(gc.margin > 0.0);
    CHECK(check_L_domination(rec).status == CheckStatus::pass);
    CHECK(check_holder_bound(rec).status == CheckStatus::pass);
}

TEST_CASE("halving eps moves the coercivity floors by less than 20 percent") {
    const RunRecord a = recorded_run(0.5);
    const RunRecord b = recorded_run(0.25);
    for (auto [fa, fb] : {std::pair{a.series.C_G1, b.series.C_G1},
                          std::pair{a.series.C_Gt1, b.series.C_Gt1}}) {
        CHECK(fa > 0.0);
        CHECK(fb > 0.0);
        CHECK(std::abs(fb - fa) / fa < 0.20);
    }
}

TEST_CASE("coercivity holds on a linear run as well") {
    ModelParams p;
    p.N = 1;
    p.mu1.mu = 0.5;
    p.mu2.mu = 0.5;
    p.eps = 0.5;
    p.nonlinearity_on = false;
    GridConfig g;
    g.h = 0.03125;
    g.sampling_dt = 0.25;
    const auto dir = std::filesystem::temp_directory_path() / "siwave_check_linear";
    std::filesystem::remove_all(dir);
    write_run(dir, p, 30.0, g);
    const RunRecord rec = load_run(dir);
    CHECK(rec.status == RunStatus::censored);
    CHECK(check_G_coercivity(rec).status == CheckStatus::pass);
}

TEST_CASE("zero velocity data reduce the Ftilde bound to zero against zero") {
    const RunRecord rec = recorded_run(0.5, 1.0, 0.0);
    CHECK(rec.Ig1 == 0.0);
    CHECK(check_F_bounds(rec).status == CheckStatus::pass);
}

TEST_CASE("an inflated C6 breaks the domination direction") {
    RunRecord rec = recorded_run(0.5);
    const double shift = (100.0 - 1.0) * rec.series.C6 * rec.params.eps / 8.0;
    rec.series.C6 *= 100.0;
    for (auto& x : rec.series.L1) x += shift;
    for (auto& x : rec.series.L2) x += shift;
    CHECK(check_L_domination(rec).status == CheckStatus::fail);
}

TEST_CASE("default closed-form suite passes across the damping and dimension grid") {
    const auto reports = run_default_suite();
    for (const auto& rep : reports) {
        INFO(rep.name, " margin=", rep.margin);
        CHECK(rep.status == CheckStatus::pass);
    }
}

TEST_CASE("reports serialize to a checks.json array") {
    const auto dir = std::filesystem::temp_directory_path() / "siwave_checks";
    std::filesystem::create_directories(dir);
    std::vector<CheckReport> reps = {check_phi_eigen(1)};
    write_checks_json(dir / "checks.json", reps);
    const auto text = read_text_file(dir / "checks.json");
    CHECK(text.find("\"check_name\"") != std::string::npos);
    CHECK(text.find("phi_eigen") != std::string::npos);
    CHECK(text.find("\"margin\"") != std::string::npos);
}

TEST_SUITE_END();
