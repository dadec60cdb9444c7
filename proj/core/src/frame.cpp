#include "siwave/frame.hpp"

#include <algorithm>
#include <cmath>

#include "siwave/errors.hpp"
#include "siwave/ioutil.hpp"

namespace siwave {

void FrameConfig::validate() const {
    if (!(T2 > 1.0)) throw config_error("FrameConfig: T2 must exceed 1");
    if (!(L1_0 > 0.0) || !(L2_0 > 0.0))
        throw config_error("FrameConfig: initial values must be positive");
    if (C1 < 0.0) throw config_error("FrameConfig: C1 must be nonnegative");
    if (!(p > 1.0) || !(q > 1.0)) throw config_error("FrameConfig: p, q must exceed 1");
    if (!(divergence_threshold > 0.0))
        throw config_error("FrameConfig: divergence_threshold must be positive");
    if (!(horizon > T2)) throw config_error("FrameConfig: horizon must exceed T2");
    if (!(rel_tol > 0.0)) throw config_error("FrameConfig: rel_tol must be positive");
}

double frame_alpha(int N, double mu_own, double mu_other, double exponent) {
    return -0.5 * (N - 1) * (exponent - 1.0) + 0.5 * mu_own - 0.5 * mu_other * exponent;
}

FrameConfig make_frame_config(const ModelParams& params, double T2, double L0_coeff, double C1) {
    FrameConfig cfg;
    cfg.C1 = C1;
    cfg.T2 = T2;
    cfg.L1_0 = L0_coeff * params.eps;
    cfg.L2_0 = L0_coeff * params.eps;
    cfg.alpha_p = frame_alpha(params.N, params.mu1.mu, params.mu2.mu, params.pq.p);
    cfg.alpha_q = frame_alpha(params.N, params.mu2.mu, params.mu1.mu, params.pq.q);
    cfg.p = params.pq.p;
    cfg.q = params.pq.q;
    return cfg;
}

std::string to_string(FrameStatus status) {
    return status == FrameStatus::diverged ? "diverged" : "censored";
}

namespace {

struct Deriv {
    double d1, d2;
};

inline Deriv rhs(const FrameConfig& c, double t, double L1, double L2) {
    return {c.C1 * std::pow(1.0 + t, c.alpha_p) * std::pow(L2, c.p),
            c.C1 * std::pow(1.0 + t, c.alpha_q) * std::pow(L1, c.q)};
}

// Cash-Karp 4(5) embedded pair
constexpr double A2 = 0.2, A3 = 0.3, A4 = 0.6, A5 = 1.0, A6 = 0.875;
constexpr double B21 = 0.2;
constexpr double B31 = 3.0 / 40.0, B32 = 9.0 / 40.0;
constexpr double B41 = 0.3, B42 = -0.9, B43 = 1.2;
constexpr double B51 = -11.0 / 54.0, B52 = 2.5, B53 = -70.0 / 27.0, B54 = 35.0 / 27.0;
constexpr double B61 = 1631.0 / 55296.0, B62 = 175.0 / 512.0, B63 = 575.0 / 13824.0,
                 B64 = 44275.0 / 110592.0, B65 = 253.0 / 4096.0;
constexpr double C1c = 37.0 / 378.0, C3c = 250.0 / 621.0, C4c = 125.0 / 594.0,
                 C6c = 512.0 / 1771.0;
constexpr double D1 = C1c - 2825.0 / 27648.0, D3 = C3c - 18575.0 / 48384.0,
                 D4 = C4c - 13525.0 / 55296.0, D5 = -277.0 / 14336.0, D6 = C6c - 0.25;

}  // namespace

FrameResult integrate_frame(const FrameConfig& cfg) {
    return integrate_frame(cfg, {});
}

FrameResult integrate_frame(const FrameConfig& cfg, std::span<const double> sample_times) {
    cfg.validate();
    FrameResult res;
    double t = cfg.T2;
    double L1 = cfg.L1_0, L2 = cfg.L2_0;
    double dt = 1e-3;
    std::size_t next_sample = 0;
    while (next_sample < sample_times.size() && sample_times[next_sample] < t) ++next_sample;
    auto record = [&](double st, double l1, double l2) {
        res.sample_t.push_back(st);
        res.sample_L1.push_back(l1);
        res.sample_L2.push_back(l2);
    };
    if (next_sample < sample_times.size() && sample_times[next_sample] == t) {
        record(t, L1, L2);
        ++next_sample;
    }

    const double scale0 = std::max(L1, L2);
    while (t < cfg.horizon) {
        if (std::max(L1, L2) >= cfg.divergence_threshold) {
            res.status = FrameStatus::diverged;
            res.T_div = t;
            return res;
        }
        bool clipped = false;
        double step = dt;
        if (next_sample < sample_times.size() && t + step >= sample_times[next_sample]) {
            step = sample_times[next_sample] - t;
            clipped = true;
        }
        if (t + step > cfg.horizon) {
            step = cfg.horizon - t;
            clipped = true;
        }
        if (step < 1e-14 * std::max(1.0, std::abs(t)) && !clipped) {
            res.status = FrameStatus::diverged;
            res.T_div = t;
            res.sharpness_flag = true;
            return res;
        }

        const Deriv k1 = rhs(cfg, t, L1, L2);
        const Deriv k2 = rhs(cfg, t + A2 * step, L1 + step * B21 * k1.d1, L2 + step * B21 * k1.d2);
        const Deriv k3 = rhs(cfg, t + A3 * step, L1 + step * (B31 * k1.d1 + B32 * k2.d1),
                             L2 + step * (B31 * k1.d2 + B32 * k2.d2));
        const Deriv k4 =
            rhs(cfg, t + A4 * step, L1 + step * (B41 * k1.d1 + B42 * k2.d1 + B43 * k3.d1),
                L2 + step * (B41 * k1.d2 + B42 * k2.d2 + B43 * k3.d2));
        const Deriv k5 = rhs(cfg, t + A5 * step,
                             L1 + step * (B51 * k1.d1 + B52 * k2.d1 + B53 * k3.d1 + B54 * k4.d1),
                             L2 + step * (B51 * k1.d2 + B52 * k2.d2 + B53 * k3.d2 + B54 * k4.d2));
        const Deriv k6 = rhs(
            cfg, t + A6 * step,
            L1 + step * (B61 * k1.d1 + B62 * k2.d1 + B63 * k3.d1 + B64 * k4.d1 + B65 * k5.d1),
            L2 + step * (B61 * k1.d2 + B62 * k2.d2 + B63 * k3.d2 + B64 * k4.d2 + B65 * k5.d2));

        const double n1 = L1 + step * (C1c * k1.d1 + C3c * k3.d1 + C4c * k4.d1 + C6c * k6.d1);
        const double n2 = L2 + step * (C1c * k1.d2 + C3c * k3.d2 + C4c * k4.d2 + C6c * k6.d2);
        const double e1 = step * (D1 * k1.d1 + D3 * k3.d1 + D4 * k4.d1 + D5 * k5.d1 + D6 * k6.d1);
        const double e2 = step * (D1 * k1.d2 + D3 * k3.d2 + D4 * k4.d2 + D5 * k5.d2 + D6 * k6.d2);

        if (!std::isfinite(n1) || !std::isfinite(n2)) {
            res.status = FrameStatus::diverged;
            res.T_div = t;
            res.sharpness_flag = true;
            return res;
        }
        const double tol1 = cfg.rel_tol * std::max({std::abs(L1), std::abs(n1), scale0});
        const double tol2 = cfg.rel_tol * std::max({std::abs(L2), std::abs(n2), scale0});
        const double err = std::max(std::abs(e1) / tol1, std::abs(e2) / tol2);

        if (err <= 1.0) {
            t += step;
            L1 = n1;
            L2 = n2;
            if (next_sample < sample_times.size() && t >= sample_times[next_sample] - 1e-12) {
                record(sample_times[next_sample], L1, L2);
                ++next_sample;
            }
        }
        const double factor =
            err > 0.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        dt = (clipped ? dt : step) * factor;
    }
    res.status = FrameStatus::censored;
    return res;
}

std::vector<FrameSweepRow> frame_sweep(const FrameConfig& base, std::span<const double> eps_list,
                                       double L0_coeff) {
    std::vector<FrameSweepRow> rows;
    rows.reserve(eps_list.size());
    for (double eps : eps_list) {
        FrameConfig cfg = base;
        cfg.L1_0 = L0_coeff * eps;
        cfg.L2_0 = L0_coeff * eps;
        const FrameResult r = integrate_frame(cfg);
        rows.push_back({eps, r.status, r.T_div});
    }
    return rows;
}

LifespanFit frame_exponent_fit(std::span<const FrameSweepRow> rows, CaseLabel case_label,
                               const ExponentPair& pq) {
    std::string censored;
    for (const auto& r : rows)
        if (r.status == FrameStatus::censored)
            censored += (censored.empty() ? "" : ", ") + format_double(r.eps);
    if (!censored.empty())
        throw config_error("frame_exponent_fit: censored runs at eps = " + censored);

    std::vector<double> eps, T;
    for (const auto& r : rows) {
        eps.push_back(r.eps);
        T.push_back(r.T_div);
    }
    return fit_lifespans(eps, T, case_label, pq);
}

}  // namespace siwave
