#include "siwave/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "siwave/errors.hpp"
#include "siwave/ioutil.hpp"
#include "siwave/specfun.hpp"

namespace siwave {

using nlohmann::json;

namespace {

std::string fmt_hash(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

const std::set<std::string> kSolveKeys = {
    "N", "mu1", "mu2", "p", "q", "R", "eps", "h", "horizon", "blowup_threshold", "sampling_dt",
    "cfl", "dt_min", "adapt_c", "cone_floor", "margin_cells", "r_max", "nonlinearity",
    "f1_scale", "f2_scale", "g1_scale", "g2_scale",
    "mu1_perturb_amp", "mu1_perturb_rate", "mu2_perturb_amp", "mu2_perturb_rate",
    "quad_tolerance", "quad_nodes", "quad_angular_nodes",
};

const std::set<std::string> kSweepExtraKeys = {
    "eps_list", "jobs", "frame_C1", "frame_threshold", "frame_horizon",
    "map_p_min", "map_p_max", "map_q_min", "map_q_max", "map_steps",
};

const std::set<std::string> kFrameKeys = {
    "N", "mu1", "mu2", "p", "q", "eps", "eps_list",
    "frame_C1", "frame_T2", "frame_threshold", "frame_horizon", "frame_L0_coeff",
    "frame_alpha_p", "frame_alpha_q", "frame_rel_tol",
};

void maybe_tabulate_perturbation(DampingProfile& profile, double amp, double rate) {
    if (amp == 0.0) return;
    if (!(rate > 0.0)) throw config_error("perturbation rate must be positive");
    const double t_hi = std::max(50.0, 20.0 / rate);
    const double dt = 0.1;
    for (double t = 0.0; t <= t_hi + 1e-9; t += dt) {
        profile.perturb_t.push_back(t);
        profile.perturb_delta.push_back(amp * std::exp(-rate * t));
    }
}

SolveConfig parse_solve_common(const KeyValueConfig& kv) {
    SolveConfig cfg;
    cfg.params.N = kv.get_int("N", 1);
    cfg.params.mu1.mu = kv.get_double("mu1", 0.5);
    cfg.params.mu2.mu = kv.get_double("mu2", 0.5);
    cfg.params.pq.p = kv.get_double("p", 2.0);
    cfg.params.pq.q = kv.get_double("q", 2.0);
    cfg.params.R = kv.get_double("R", 1.0);
    cfg.params.eps = kv.get_double("eps", 0.1);
    cfg.params.nonlinearity_on = kv.get_bool("nonlinearity", true);
    cfg.params.f1_scale = kv.get_double("f1_scale", 1.0);
    cfg.params.f2_scale = kv.get_double("f2_scale", 1.0);
    cfg.params.g1_scale = kv.get_double("g1_scale", 1.0);
    cfg.params.g2_scale = kv.get_double("g2_scale", 1.0);
    maybe_tabulate_perturbation(cfg.params.mu1, kv.get_double("mu1_perturb_amp", 0.0),
                                kv.get_double("mu1_perturb_rate", 1.0));
    maybe_tabulate_perturbation(cfg.params.mu2, kv.get_double("mu2_perturb_amp", 0.0),
                                kv.get_double("mu2_perturb_rate", 1.0));

    cfg.grid.h = kv.get_double("h", 0.025);
    cfg.grid.cfl = kv.get_double("cfl", 0.5);
    cfg.grid.dt_min = kv.get_double("dt_min", 1e-10);
    cfg.grid.adapt_c = kv.get_double("adapt_c", 0.2);
    cfg.grid.blowup_threshold = kv.get_double("blowup_threshold", 1e6);
    cfg.grid.sampling_dt = kv.get_double("sampling_dt", 0.5);
    cfg.grid.cone_floor = kv.get_double("cone_floor", 0.1);
    cfg.grid.margin_cells = kv.get_int("margin_cells", 8);
    cfg.grid.r_max = kv.get_double("r_max", 0.0);
    cfg.horizon = kv.get_double("horizon", 50.0);

    cfg.quad.tolerance = kv.get_double("quad_tolerance", 1e-10);
    cfg.quad.node_count = kv.get_int("quad_nodes", 256);
    cfg.quad.angular_nodes = kv.get_int("quad_angular_nodes", 64);
    return cfg;
}

}  // namespace

SolveConfig parse_solve_config(const KeyValueConfig& kv) {
    kv.require_only(kSolveKeys);
    return parse_solve_common(kv);
}

SweepConfig parse_sweep_config(const KeyValueConfig& kv) {
    std::set<std::string> allowed = kSolveKeys;
    allowed.insert(kSweepExtraKeys.begin(), kSweepExtraKeys.end());
    kv.require_only(allowed);

    SweepConfig cfg;
    cfg.base = parse_solve_common(kv);
    cfg.eps_list = kv.get_list("eps_list");
    cfg.jobs = kv.get_int("jobs", 1);
    cfg.frame_C1 = kv.get_double("frame_C1", 1.0);
    cfg.frame_threshold = kv.get_double("frame_threshold", 1e12);
    cfg.frame_horizon = kv.get_double("frame_horizon", 1e7);
    cfg.map_p_min = kv.get_double("map_p_min", 1.1);
    cfg.map_p_max = kv.get_double("map_p_max", 4.0);
    cfg.map_q_min = kv.get_double("map_q_min", 1.1);
    cfg.map_q_max = kv.get_double("map_q_max", 4.0);
    cfg.map_steps = kv.get_int("map_steps", 30);
    cfg.config_text = kv.text();
    return cfg;
}

FrameRunConfig parse_frame_config(const KeyValueConfig& kv) {
    kv.require_only(kFrameKeys);
    FrameRunConfig cfg;
    ModelParams params;
    params.N = kv.get_int("N", 1);
    params.mu1.mu = kv.get_double("mu1", 0.5);
    params.mu2.mu = kv.get_double("mu2", 0.5);
    params.pq.p = kv.get_double("p", 2.0);
    params.pq.q = kv.get_double("q", 2.0);
    params.eps = kv.get_double("eps", 0.01);
    cfg.pq = params.pq;
    cfg.case_label = classify(params).case_label;
    cfg.L0_coeff = kv.get_double("frame_L0_coeff", 0.125);

    cfg.frame = make_frame_config(params, kv.get_double("frame_T2", 2.0), cfg.L0_coeff,
                                  kv.get_double("frame_C1", 1.0));
    if (kv.has("frame_alpha_p")) cfg.frame.alpha_p = kv.get_double("frame_alpha_p", 0.0);
    if (kv.has("frame_alpha_q")) cfg.frame.alpha_q = kv.get_double("frame_alpha_q", 0.0);
    cfg.frame.divergence_threshold = kv.get_double("frame_threshold", 1e12);
    cfg.frame.horizon = kv.get_double("frame_horizon", 1e7);
    cfg.frame.rel_tol = kv.get_double("frame_rel_tol", 1e-8);
    cfg.eps_list = kv.get_list("eps_list");
    if (cfg.eps_list.empty()) cfg.eps_list = {params.eps};
    cfg.config_text = kv.text();
    return cfg;
}

std::vector<RegionMapRow> region_map(const RegionMapConfig& cfg) {
    if (cfg.steps < 1) throw config_error("region_map: steps must be positive");
    std::vector<RegionMapRow> rows;
    rows.reserve(static_cast<std::size_t>((cfg.steps + 1) * (cfg.steps + 1)));
    for (int i = 0; i <= cfg.steps; ++i) {
        const double p = cfg.p_min + (cfg.p_max - cfg.p_min) * i / cfg.steps;
        for (int j = 0; j <= cfg.steps; ++j) {
            const double q = cfg.q_min + (cfg.q_max - cfg.q_min) * j / cfg.steps;
            const RegionClassification rc = classify(cfg.N, cfg.mu1, cfg.mu2, p, q);
            rows.push_back({p, q, rc.omega_mu, rc.omega_sigma, rc.case_label});
        }
    }
    return rows;
}

void write_region_map_csv(const std::filesystem::path& file,
                          std::span<const RegionMapRow> rows) {
    std::string out = "p,q,omega_mu,omega_sigma,case_label\n";
    for (const auto& r : rows) {
        out += format_double(r.p) + "," + format_double(r.q) + "," + format_double(r.omega_mu) +
               "," + format_double(r.omega_sigma) + "," + to_string(r.label) + "\n";
    }
    write_text_file(file, out);
}

namespace {

json fit_to_json(const LifespanFit& f) {
    json j;
    j["slope"] = f.fit.slope;
    j["intercept"] = f.fit.intercept;
    j["r2"] = f.fit.r2;
    j["n"] = f.fit.n;
    j["case_used"] = to_string(f.case_used);
    j["x_model"] = f.x_model;
    j["span_decades"] = f.span_decades;
    j["curvature"] = f.curvature;
    j["regime_warning"] = f.regime_warning;
    return j;
}

}  // namespace

json ExperimentReport::to_json() const {
    json j;
    j["schema_version"] = schema_version;
    j["params"] = {{"N", N},     {"mu1", mu1}, {"mu2", mu2},
                   {"p", p},     {"q", q},     {"R", R}};
    j["eps_list"] = eps_list;
    json runs_j = json::array();
    for (const auto& r : runs) {
        runs_j.push_back({{"eps", r.eps},
                          {"status", to_string(r.status)},
                          {"T", r.T},
                          {"peak_ut", r.peak_ut},
                          {"peak_vt", r.peak_vt},
                          {"cone_ok", r.cone_ok}});
    }
    j["runs"] = runs_j;
    j["classification"] = {{"lambda_pq", classification.lambda_pq},
                           {"lambda_qp", classification.lambda_qp},
                           {"omega_mu", classification.omega_mu},
                           {"omega_sigma", classification.omega_sigma},
                           {"case_label", to_string(classification.case_label)},
                           {"lifespan_exponent", classification.lifespan_exponent},
                           {"lifespan_bound", classification.lifespan_bound}};
    j["paper_exponent"] = paper_exponent;
    j["pde_fit"] = pde_fit_valid ? fit_to_json(pde_fit) : json(nullptr);
    j["frame_fit"] = frame_fit_valid ? fit_to_json(frame_fit) : json(nullptr);
    j["frame_fit_note"] = frame_fit_note;
    json frame_j = json::array();
    for (const auto& r : frame_rows)
        frame_j.push_back(
            {{"eps", r.eps}, {"status", to_string(r.status)}, {"T_div", r.T_div}});
    j["frame_rows"] = frame_j;
    j["agreement_ratio"] = agreement_valid ? json(agreement_ratio) : json(nullptr);
    j["frame_C1_used"] = frame_C1_used;
    j["frame_T2"] = frame_T2;
    j["frame_L0_coeff"] = frame_L0_coeff;
    json sens = json::array();
    for (const auto& [c1, tdiv] : frame_sensitivity)
        sens.push_back({{"C1", c1}, {"T_div", tdiv}});
    j["frame_sensitivity"] = sens;
    j["provenance"] = {{"config_hash", config_hash},
                       {"h", h},
                       {"cfl", cfl},
                       {"sampling_dt", sampling_dt},
                       {"seeds", json::array()}};
    return j;
}

ExperimentReport sweep(const SweepConfig& cfg) {
    if (cfg.eps_list.size() < 4)
        throw config_error("sweep: need at least 4 eps values");
    for (double e : cfg.eps_list)
        if (!(e > 0.0)) throw config_error("sweep: eps values must be positive");

    const ModelParams& base = cfg.base.params;
    ExperimentReport report;
    report.N = base.N;
    report.mu1 = base.mu1.mu;
    report.mu2 = base.mu2.mu;
    report.p = base.pq.p;
    report.q = base.pq.q;
    report.R = base.R;
    report.eps_list = cfg.eps_list;
    report.classification = classify(base);
    report.paper_exponent = -report.classification.omega_mu;
    report.config_hash = fmt_hash(fnv1a_hash(cfg.config_text));
    report.h = cfg.base.grid.h;
    report.cfl = cfg.base.grid.cfl;
    report.sampling_dt = cfg.base.grid.sampling_dt;

    // PDE runs, parallel over eps
    const std::size_t n = cfg.eps_list.size();
    std::vector<RunOutcome> outcomes(n);
    std::vector<std::exception_ptr> errors(n);
    const int jobs = std::max(1, cfg.jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                ModelParams params = base;
                params.eps = cfg.eps_list[i];
                outcomes[i] =
                    run_until_blowup(params, cfg.base.horizon, cfg.base.grid, cfg.base.quad);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<double> fit_eps, fit_T;
    for (std::size_t i = 0; i < n; ++i) {
        const RunOutcome& o = outcomes[i];
        RunSummary sum;
        sum.eps = cfg.eps_list[i];
        sum.status = o.status;
        sum.T = o.status == RunStatus::blew_up ? o.T_blowup : o.horizon;
        sum.peak_ut = o.peak_ut;
        sum.peak_vt = o.peak_vt;
        sum.cone_ok = o.cone_ok;
        report.runs.push_back(sum);
        if (o.status == RunStatus::blew_up) {
            fit_eps.push_back(sum.eps);
            fit_T.push_back(sum.T);
        }
    }

    if (fit_eps.size() >= 4 &&
        report.classification.case_label != CaseLabel::outside_proved_region) {
        report.pde_fit =
            fit_lifespans(fit_eps, fit_T, report.classification.case_label, base.pq);
        report.pde_fit_valid = true;
    }

    // frame comparison, calibrated on the first eps in the list
    const FunctionalSeries& cal = outcomes[0].series;
    if (std::isfinite(cal.T2_emp) && cal.C6 > 0.0) {
        report.frame_T2 = cal.T2_emp;
        report.frame_L0_coeff = cal.C6 / 8.0;
        double C1 = cfg.frame_C1;
        if (C1 <= 0.0) {
            // empirical Hoelder constant: min over samples of (nl_i/8) / ((1+t)^alpha L_other^p)
            const double ap = frame_alpha(base.N, base.mu1.mu, base.mu2.mu, base.pq.p);
            const double aq = frame_alpha(base.N, base.mu2.mu, base.mu1.mu, base.pq.q);
            double cmin = std::numeric_limits<double>::infinity();
            const double window_end = outcomes[0].status == RunStatus::blew_up
                                          ? 0.9 * outcomes[0].T_blowup
                                          : outcomes[0].horizon;
            for (std::size_t i = 0; i < cal.size(); ++i) {
                if (cal.t[i] < cal.T2_emp || cal.t[i] > window_end) continue;
                const double w1 = std::pow(1.0 + cal.t[i], ap) * std::pow(cal.L2[i], base.pq.p);
                const double w2 = std::pow(1.0 + cal.t[i], aq) * std::pow(cal.L1[i], base.pq.q);
                if (w1 > 0.0 && cal.nl1[i] > 0.0) cmin = std::min(cmin, 0.125 * cal.nl1[i] / w1);
                if (w2 > 0.0 && cal.nl2[i] > 0.0) cmin = std::min(cmin, 0.125 * cal.nl2[i] / w2);
            }
            C1 = std::isfinite(cmin) && cmin > 0.0 ? cmin : 1.0;
        }
        report.frame_C1_used = C1;

        FrameConfig frame_base = make_frame_config(base, cal.T2_emp, report.frame_L0_coeff, C1);
        frame_base.divergence_threshold = cfg.frame_threshold;
        frame_base.horizon = cfg.frame_horizon;
        report.frame_rows = frame_sweep(frame_base, cfg.eps_list, report.frame_L0_coeff);
        try {
            report.frame_fit = frame_exponent_fit(report.frame_rows,
                                                  report.classification.case_label, base.pq);
            report.frame_fit_valid = true;
        } catch (const config_error& err) {
            report.frame_fit_note = err.what();
        }

        // divergence-time sensitivity to the consolidated constant, one
        // decade either side, at the middle eps of the sweep
        const double eps_mid = cfg.eps_list[cfg.eps_list.size() / 2];
        for (double c_scan : {0.1 * C1, C1, 10.0 * C1}) {
            FrameConfig scan = frame_base;
            scan.C1 = c_scan;
            scan.L1_0 = scan.L2_0 = report.frame_L0_coeff * eps_mid;
            const FrameResult r = integrate_frame(scan);
            report.frame_sensitivity.emplace_back(
                c_scan, r.status == FrameStatus::diverged
                            ? r.T_div
                            : std::numeric_limits<double>::quiet_NaN());
        }
    } else {
        report.frame_fit_note = "calibration run did not open a T2 window";
    }

    if (report.pde_fit_valid && report.frame_fit_valid &&
        report.frame_fit.fit.slope != 0.0) {
        report.agreement_ratio = report.pde_fit.fit.slope / report.frame_fit.fit.slope;
        report.agreement_valid = true;
    }
    return report;
}

void emit_report(const ExperimentReport& report, std::span<const RegionMapRow> map_rows,
                 const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / "report.json", report.to_json().dump(2) + "\n");

    std::string lifespan = "eps,T,status\n";
    for (const auto& r : report.runs)
        lifespan += format_double(r.eps) + "," + format_double(r.T) + "," + to_string(r.status) +
                    "\n";
    write_text_file(dir / "lifespan.csv", lifespan);
    write_region_map_csv(dir / "regionmap.csv", map_rows);
}

void write_frame_csv(const std::filesystem::path& file, std::span<const FrameSweepRow> rows) {
    std::string out = "eps,T_div,status\n";
    for (const auto& r : rows)
        out += format_double(r.eps) + "," + format_double(r.T_div) + "," + to_string(r.status) +
               "\n";
    write_text_file(file, out);
}

void write_fit_json(const std::filesystem::path& file, const LifespanFit& fit) {
    write_text_file(file, fit_to_json(fit).dump(2) + "\n");
}

}  // namespace siwave
