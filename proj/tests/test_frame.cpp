#include <cmath>

#include "doctest.h"
#include "siwave/errors.hpp"
#include "siwave/frame.hpp"
#include "siwave/functionals.hpp"

using namespace siwave;

namespace {

FrameConfig symmetric_config(double eps) {
    ModelParams p;
    p.N = 1;
    p.mu1.mu = 0.5;
    p.mu2.mu = 0.5;
    p.pq = {2.0, 2.0};
    p.eps = eps;
    return make_frame_config(p, 2.0, 0.125);
}

}  // namespace

TEST_SUITE_BEGIN("frame");

TEST_CASE("alpha exponents match the instance") {
    // N = 1 kills the (N-1) term; alpha = mu_own/2 - mu_other * e / 2
    CHECK(frame_alpha(1, 0.5, 0.5, 2.0) == doctest::Approx(0.25 - 0.5));
    CHECK(frame_alpha(3, 1.0, 2.0, 2.0) == doctest::Approx(-1.0 + 0.5 - 2.0));
}

TEST_CASE("symmetric configuration keeps the two components identical") {
    FrameConfig cfg = symmetric_config(0.01);
    std::vector<double> samples;
    for (double t = 2.0; t < 40.0; t += 1.0) samples.push_back(t);
    const FrameResult r = integrate_frame(cfg, samples);
    REQUIRE(!r.sample_t.empty());
    for (std::size_t i = 0; i < r.sample_t.size(); ++i)
        CHECK(r.sample_L1[i] == r.sample_L2[i]);
}

TEST_CASE("divergence time is finite and halving eps delays it") {
    const FrameResult a = integrate_frame(symmetric_config(0.01));
    const FrameResult b = integrate_frame(symmetric_config(0.02));
    REQUIRE(a.status == FrameStatus::diverged);
    REQUIRE(b.status == FrameStatus::diverged);
    CHECK(std::isfinite(a.T_div));
    CHECK(b.T_div < a.T_div);
}

TEST_CASE("zero coupling constant keeps L flat and censors the run") {
    FrameConfig cfg = symmetric_config(0.01);
    cfg.C1 = 0.0;
    cfg.horizon = 1e4;
    std::vector<double> samples = {10.0, 100.0, 1000.0};
    const FrameResult r = integrate_frame(cfg, samples);
    CHECK(r.status == FrameStatus::censored);
    for (double v : r.sample_L1) CHECK(v == doctest::Approx(cfg.L1_0).epsilon(1e-12));
}

TEST_CASE("divergence time is insensitive to the threshold (sharpness)") {
    FrameConfig cfg = symmetric_config(0.01);
    cfg.divergence_threshold = 1e12;
    const FrameResult a = integrate_frame(cfg);
    cfg.divergence_threshold = 1e14;
    const FrameResult b = integrate_frame(cfg);
    CHECK(std::abs(b.T_div - a.T_div) / a.T_div < 0.01);
}

TEST_CASE("monotone in eps, C1 and initial values") {
    double prev = 1e300;
    for (double eps : {0.005, 0.01, 0.02, 0.04}) {
        const FrameResult r = integrate_frame(symmetric_config(eps));
        REQUIRE(r.status == FrameStatus::diverged);
        CHECK(r.T_div <= prev);
        prev = r.T_div;
    }
    prev = 1e300;
    for (double c1 : {0.5, 1.0, 2.0, 4.0}) {
        FrameConfig cfg = symmetric_config(0.01);
        cfg.C1 = c1;
        const FrameResult r = integrate_frame(cfg);
        CHECK(r.T_div <= prev);
        prev = r.T_div;
    }
    prev = 1e300;
    for (double scale : {1.0, 2.0, 4.0}) {
        FrameConfig cfg = symmetric_config(0.01);
        cfg.L1_0 *= scale;
        cfg.L2_0 *= scale;
        const FrameResult r = integrate_frame(cfg);
        CHECK(r.T_div <= prev);
        prev = r.T_div;
    }
}

TEST_CASE("agreement with the region classification over a (p, q) sample") {
    // subcritical instances diverge before the horizon; instances deep in
    // the complement stay censored at the same horizon for small eps
    ModelParams base;
    base.N = 3;
    base.mu1.mu = 1.0;
    base.mu2.mu = 1.0;
    base.eps = 1e-3;
    const double horizon = 1e5;
    for (double pe : {1.2, 1.3}) {
        base.pq = {pe, pe};
        REQUIRE(classify(base).case_label == CaseLabel::subcritical_blowup);
        FrameConfig cfg = make_frame_config(base, 2.0, 0.125);
        cfg.horizon = horizon;
        CHECK(integrate_frame(cfg).status == FrameStatus::diverged);
    }
    for (double pe : {3.5, 4.0}) {
        base.pq = {pe, pe};
        const RegionClassification rc = classify(base);
        REQUIRE(rc.lambda_pq <= -0.5);
        REQUIRE(rc.lambda_qp <= -0.5);
        FrameConfig cfg = make_frame_config(base, 2.0, 0.125);
        cfg.horizon = horizon;
        CHECK(integrate_frame(cfg).status == FrameStatus::censored);
    }
}

TEST_CASE("synthetic power law is recovered to near machine precision") {
    std::vector<double> eps, T;
    const double A = 3.7, beta = 1.31;
    for (double e = 0.2; e > 1e-4; e *= 0.5) {
        eps.push_back(e);
        T.push_back(A * std::pow(e, -beta));
    }
    const LifespanFit fit =
        fit_lifespans(eps, T, CaseLabel::subcritical_blowup, {2.0, 2.0});
    CHECK(fit.fit.slope == doctest::Approx(-beta).epsilon(1e-10));
    CHECK(std::exp(fit.fit.intercept) == doctest::Approx(A).epsilon(1e-10));
    CHECK(fit.fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!fit.regime_warning);
}

TEST_CASE("frame sweep produces a clean negative slope") {
    const FrameConfig base = symmetric_config(1.0);
    std::vector<double> eps;
    for (int k = 3; k <= 8; ++k) eps.push_back(std::pow(2.0, -k));
    const auto rows = frame_sweep(base, eps, 0.125);
    for (const auto& r : rows) REQUIRE(r.status == FrameStatus::diverged);
    const LifespanFit fit = frame_exponent_fit(rows, CaseLabel::subcritical_blowup, {2.0, 2.0});
    CHECK(fit.fit.slope < 0.0);
    CHECK(fit.fit.r2 > 0.98);
}

TEST_CASE("the fit refuses censored rows and names them") {
    std::vector<FrameSweepRow> rows;
    rows.push_back({0.1, FrameStatus::diverged, 10.0});
    rows.push_back({0.05, FrameStatus::diverged, 25.0});
    rows.push_back({0.025, FrameStatus::censored, 0.0});
    rows.push_back({0.0125, FrameStatus::diverged, 200.0});
    try {
        frame_exponent_fit(rows, CaseLabel::subcritical_blowup, {2.0, 2.0});
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("0.025") != std::string::npos);
    }
}

TEST_CASE("a critical-model fit applied to power-law data is flagged") {
    std::vector<double> eps, T;
    for (double e = 0.2; e > 2e-3; e *= 0.5) {
        eps.push_back(e);
        T.push_back(2.0 * std::pow(e, -1.2));
    }
    const LifespanFit fit = fit_lifespans(eps, T, CaseLabel::critical_blowup, {2.0, 2.0});
    CHECK((fit.fit.r2 < 0.95 || fit.regime_warning));
}

TEST_CASE("the frame is a lower envelope for the measured functionals") {
    ModelParams p;
    p.N = 1;
    p.mu1.mu = 0.5;
    p.mu2.mu = 0.5;
    p.pq = {2.0, 2.0};
    p.eps = 0.5;
    GridConfig g;
    g.h = 0.03125;
    g.sampling_dt = 0.25;
    const RunOutcome o = run_until_blowup(p, 40.0, g);
    REQUIRE(o.status == RunStatus::blew_up);
    const auto& s = o.series;
    REQUIRE(std::isfinite(s.T2_emp));
    const double window_end = 0.9 * o.T_blowup;

    // empirical constant: the worst ratio of measured L' to the frame shape
    const double ap = frame_alpha(p.N, p.mu1.mu, p.mu2.mu, p.pq.p);
    const double aq = frame_alpha(p.N, p.mu2.mu, p.mu1.mu, p.pq.q);
    double c_emp = 1e300;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.t[i] < s.T2_emp || s.t[i] > window_end) continue;
        const double w1 = std::pow(1.0 + s.t[i], ap) * std::pow(s.L2[i], p.pq.p);
        const double w2 = std::pow(1.0 + s.t[i], aq) * std::pow(s.L1[i], p.pq.q);
        if (w1 > 0.0) c_emp = std::min(c_emp, 0.125 * s.nl1[i] / w1);
        if (w2 > 0.0) c_emp = std::min(c_emp, 0.125 * s.nl2[i] / w2);
    }
    REQUIRE(c_emp < 1e300);
    REQUIRE(c_emp > 0.0);

    FrameConfig cfg = make_frame_config(p, s.T2_emp, s.C6 / 8.0, c_emp);
    std::vector<double> samples;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.t[i] >= s.T2_emp && s.t[i] <= window_end) samples.push_back(s.t[i]);
    const FrameResult fr = integrate_frame(cfg, samples);
    std::size_t k = 0;
    for (std::size_t i = 0; i < s.size() && k < fr.sample_t.size(); ++i) {
        if (s.t[i] < s.T2_emp || s.t[i] > window_end) continue;
        CHECK(fr.sample_L1[k] <= s.L1[i] * (1.0 + 1e-6) + 1e-30);
        CHECK(fr.sample_L2[k] <= s.L2[i] * (1.0 + 1e-6) + 1e-30);
        ++k;
    }
    CHECK(k == fr.sample_t.size());
}

TEST_SUITE_END();
