// Command-line front end: special-function evaluation, region
// classification, radial solver runs, iteration-frame integrations,
// identity verification and experiment sweeps.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "siwave/curves.hpp"
#include "siwave/errors.hpp"
#include "siwave/frame.hpp"
#include "siwave/functionals.hpp"
#include "siwave/harness.hpp"
#include "siwave/ioutil.hpp"
#include "siwave/specfun.hpp"
#include "siwave/verification.hpp"

namespace fs = std::filesystem;
using namespace siwave;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitVerifyFailed = 3;

struct SpecfunArgs {
    std::string fn;
    double mu = 1.0, nu = 0.0, r = 0.0, t = 1.0;
    int N = 1;
    bool batch = false;
};

double eval_specfun(const std::string& fn, double mu, double nu, int N, double r, double t) {
    const QuadratureConfig quad;
    if (fn == "K") return modified_bessel_k(nu, t, quad);
    if (fn == "phi") return phi_radial(N, r, quad);
    if (fn == "rho") return rho(mu, t, quad);
    if (fn == "rholog") return rho_log_deriv(mu, t, quad);
    if (fn == "gamma") return gamma_coeff(mu, t, quad);
    if (fn == "psi") return psi(mu, N, r, t, quad);
    if (fn == "m") return multiplier_m(mu, t);
    throw config_error("unknown specfun --fn: " + fn);
}

int run_specfun_batch(const std::string& fn) {
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream is(line);
        std::vector<double> args;
        double x;
        while (is >> x) args.push_back(x);
        double value;
        if (fn == "K" && args.size() == 2) {
            value = eval_specfun(fn, 0, args[0], 1, 0, args[1]);
        } else if (fn == "phi" && args.size() == 2) {
            value = eval_specfun(fn, 0, 0, static_cast<int>(args[0]), args[1], 0);
        } else if ((fn == "rho" || fn == "rholog" || fn == "gamma" || fn == "m") &&
                   args.size() == 2) {
            value = eval_specfun(fn, args[0], 0, 1, 0, args[1]);
        } else if (fn == "psi" && args.size() == 4) {
            value = eval_specfun(fn, args[0], 0, static_cast<int>(args[1]), args[2], args[3]);
        } else {
            throw config_error("bad tuple arity for --fn " + fn + ": " + line);
        }
        std::string row;
        for (double a : args) row += format_double(a) + ",";
        std::cout << row << format_double(value) << "\n";
    }
    return kExitOk;
}

nlohmann::json classification_json(const RegionClassification& rc) {
    nlohmann::json j;
    j["lambda_pq"] = rc.lambda_pq;
    j["lambda_qp"] = rc.lambda_qp;
    j["omega_mu"] = rc.omega_mu;
    j["omega_sigma"] = rc.omega_sigma;
    j["case_label"] = to_string(rc.case_label);
    j["lifespan_exponent"] = rc.lifespan_exponent;
    j["lifespan_bound"] = rc.lifespan_bound;
    return j;
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw config_error("range must be lo:hi, got " + text);
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the weakly coupled scale-invariant damped wave system"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    int jobs = 0;
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker threads for sweeps");

    // specfun eval
    auto* sf = app.add_subcommand("specfun", "evaluate the test-function apparatus");
    sf->fallthrough();
    auto* sf_eval = sf->add_subcommand("eval", "evaluate one function");
    sf_eval->fallthrough();
    SpecfunArgs sfa;
    sf_eval->add_option("--fn", sfa.fn, "one of K, phi, rho, rholog, gamma, psi, m")->required();
    sf_eval->add_option("--mu", sfa.mu, "damping coefficient");
    sf_eval->add_option("--nu", sfa.nu, "Bessel order");
    sf_eval->add_option("--N", sfa.N, "space dimension");
    sf_eval->add_option("--r", sfa.r, "radius");
    sf_eval->add_option("--t", sfa.t, "time");
    sf_eval->add_flag("--batch", sfa.batch, "read whitespace-separated tuples from stdin, emit CSV");

    // curve classify / map
    auto* curve = app.add_subcommand("curve", "critical-curve arithmetic");
    curve->fallthrough();
    auto* cc = curve->add_subcommand("classify", "classify one parameter instance");
    cc->fallthrough();
    int cc_N = 1;
    double cc_mu1 = 0.5, cc_mu2 = 0.5, cc_p = 2.0, cc_q = 2.0;
    cc->add_option("--N", cc_N)->required();
    cc->add_option("--mu1", cc_mu1)->required();
    cc->add_option("--mu2", cc_mu2)->required();
    cc->add_option("--p", cc_p)->required();
    cc->add_option("--q", cc_q)->required();
    auto* cm = curve->add_subcommand("map", "emit a (p, q) region grid as CSV");
    cm->fallthrough();
    int cm_N = 1, cm_steps = 30;
    double cm_mu1 = 0.5, cm_mu2 = 0.5;
    std::string cm_prange = "1.1:4", cm_qrange = "1.1:4";
    cm->add_option("--N", cm_N)->required();
    cm->add_option("--mu1", cm_mu1)->required();
    cm->add_option("--mu2", cm_mu2)->required();
    cm->add_option("--p-range", cm_prange, "lo:hi");
    cm->add_option("--q-range", cm_qrange, "lo:hi");
    cm->add_option("--steps", cm_steps);

    // solve
    auto* solve = app.add_subcommand("solve", "run the radial solver, write series + outcome");
    solve->fallthrough();

    // frame run / sweep
    auto* frame = app.add_subcommand("frame", "iteration-frame ODE system");
    frame->fallthrough();
    auto* frun = frame->add_subcommand("run", "integrate one frame instance");
    frun->fallthrough();
    auto* fsweep = frame->add_subcommand("sweep", "integrate over an eps list");
    fsweep->fallthrough();
    std::string fsweep_eps;
    fsweep->add_option("--eps", fsweep_eps, "comma-separated eps list (overrides config)");

    // verify
    auto* verify = app.add_subcommand("verify", "identity and lemma checkers");
    verify->fallthrough();
    std::string verify_what = "all";
    std::string verify_run;
    verify->add_option("what", verify_what, "all or a single check name");
    verify->add_option("--run", verify_run, "recorded run directory (series.csv + constants.json)");

    // sweep / map
    auto* sweep_cmd = app.add_subcommand("sweep", "full eps sweep with fits and frame comparison");
    sweep_cmd->fallthrough();
    auto* map_cmd = app.add_subcommand("map", "region map from a config file");
    map_cmd->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sf_eval->parsed()) {
            if (sfa.batch) return run_specfun_batch(sfa.fn);
            std::cout << format_double(eval_specfun(sfa.fn, sfa.mu, sfa.nu, sfa.N, sfa.r, sfa.t))
                      << "\n";
            return kExitOk;
        }
        if (cc->parsed()) {
            std::cout << classification_json(classify(cc_N, cc_mu1, cc_mu2, cc_p, cc_q)).dump(2)
                      << "\n";
            return kExitOk;
        }
        if (cm->parsed()) {
            RegionMapConfig cfg;
            cfg.N = cm_N;
            cfg.mu1 = cm_mu1;
            cfg.mu2 = cm_mu2;
            std::tie(cfg.p_min, cfg.p_max) = parse_range(cm_prange);
            std::tie(cfg.q_min, cfg.q_max) = parse_range(cm_qrange);
            cfg.steps = cm_steps;
            const auto rows = region_map(cfg);
            std::cout << "p,q,omega_mu,omega_sigma,case_label\n";
            for (const auto& r : rows)
                std::cout << format_double(r.p) << "," << format_double(r.q) << ","
                          << format_double(r.omega_mu) << "," << format_double(r.omega_sigma)
                          << "," << to_string(r.label) << "\n";
            return kExitOk;
        }
        if (solve->parsed()) {
            if (config_path.empty()) throw config_error("solve: --config is required");
            const SolveConfig cfg = parse_solve_config(KeyValueConfig::from_file(config_path));
            const RunRecord rec = write_run(out_dir, cfg.params, cfg.horizon, cfg.grid, cfg.quad);
            std::cout << "status=" << to_string(rec.status);
            if (rec.status == RunStatus::blew_up)
                std::cout << " T_blowup=" << format_double(rec.T_blowup);
            std::cout << "\n";
            return kExitOk;
        }
        if (frun->parsed() || fsweep->parsed()) {
            if (config_path.empty()) throw config_error("frame: --config is required");
            FrameRunConfig cfg = parse_frame_config(KeyValueConfig::from_file(config_path));
            if (fsweep->parsed() && !fsweep_eps.empty())
                cfg.eps_list = parse_double_list(fsweep_eps);
            fs::create_directories(out_dir);
            const auto rows = frame_sweep(cfg.frame, cfg.eps_list, cfg.L0_coeff);
            write_frame_csv(fs::path(out_dir) / "frame.csv", rows);
            if (fsweep->parsed()) {
                const LifespanFit fit = frame_exponent_fit(rows, cfg.case_label, cfg.pq);
                write_fit_json(fs::path(out_dir) / "fit.json", fit);
            }
            for (const auto& r : rows)
                std::cout << format_double(r.eps) << " " << to_string(r.status) << " "
                          << format_double(r.T_div) << "\n";
            return kExitOk;
        }
        if (verify->parsed()) {
            std::vector<CheckReport> reports;
            const QuadratureConfig quad;
            if (verify_what == "all") {
                reports = run_default_suite(quad);
                if (!verify_run.empty()) {
                    const RunRecord rec = load_run(verify_run);
                    const auto more = run_record_suite(rec, quad);
                    reports.insert(reports.end(), more.begin(), more.end());
                }
            } else {
                // single closed-form checks run on a default grid; run-dependent
                // names need --run
                std::vector<double> t_grid;
                for (double t = 0.25; t <= 20.0 + 1e-9; t += 0.25) t_grid.push_back(t);
                if (verify_what == "rho_ode") {
                    for (double mu : {0.5, 1.0, 2.0, 3.0})
                        reports.push_back(check_rho_ode(mu, t_grid, quad));
                } else if (verify_what == "phi_eigen") {
                    for (int N : {1, 2, 3}) reports.push_back(check_phi_eigen(N, 8.0, quad));
                } else if (verify_what == "psi_conjugate") {
                    for (double mu : {0.5, 1.0, 2.0, 3.0})
                        for (int N : {1, 2, 3}) reports.push_back(check_psi_conjugate(mu, N, quad));
                } else if (verify_what == "lemma31") {
                    reports.push_back(check_lemma31(1.0, 2, 2.0, 1.0, quad));
                    reports.push_back(check_lemma31(0.5, 1, 1.5, 1.0, quad));
                } else if (verify_what == "asymptotics") {
                    const std::vector<double> nus = {0.0, 0.25, -0.25, 0.5, 1.0};
                    const std::vector<double> mus = {0.5, 1.0, 2.0, 3.0};
                    reports.push_back(check_asymptotics(nus, mus, quad));
                } else if (verify_what == "F_bounds" || verify_what == "G_coercivity" ||
                           verify_what == "L_domination" || verify_what == "holder_bound") {
                    if (verify_run.empty())
                        throw config_error("verify " + verify_what + ": --run is required");
                    const RunRecord rec = load_run(verify_run);
                    if (verify_what == "F_bounds") reports.push_back(check_F_bounds(rec));
                    if (verify_what == "G_coercivity") reports.push_back(check_G_coercivity(rec));
                    if (verify_what == "L_domination") reports.push_back(check_L_domination(rec));
                    if (verify_what == "holder_bound")
                        reports.push_back(check_holder_bound(rec, quad));
                } else {
                    throw config_error("unknown check name: " + verify_what);
                }
            }
            fs::create_directories(out_dir);
            write_checks_json(fs::path(out_dir) / "checks.json", reports);
            bool any_fail = false;
            for (const auto& r : reports) {
                std::cout << (r.status == CheckStatus::pass ? "PASS " : r.status == CheckStatus::fail ? "FAIL " : "???? ")
                          << r.name << " margin=" << format_double(r.margin) << "\n";
                if (r.status == CheckStatus::fail) any_fail = true;
            }
            return any_fail ? kExitVerifyFailed : kExitOk;
        }
        if (sweep_cmd->parsed()) {
            if (config_path.empty()) throw config_error("sweep: --config is required");
            SweepConfig cfg = parse_sweep_config(KeyValueConfig::from_file(config_path));
            if (jobs > 0) cfg.jobs = jobs;
            const ExperimentReport report = sweep(cfg);
            RegionMapConfig mc;
            mc.N = report.N;
            mc.mu1 = report.mu1;
            mc.mu2 = report.mu2;
            mc.p_min = cfg.map_p_min;
            mc.p_max = cfg.map_p_max;
            mc.q_min = cfg.map_q_min;
            mc.q_max = cfg.map_q_max;
            mc.steps = cfg.map_steps;
            emit_report(report, region_map(mc), out_dir);
            std::cout << report.to_json().dump(2) << "\n";
            return kExitOk;
        }
        if (map_cmd->parsed()) {
            if (config_path.empty()) throw config_error("map: --config is required");
            const SweepConfig cfg = parse_sweep_config(KeyValueConfig::from_file(config_path));
            RegionMapConfig mc;
            mc.N = cfg.base.params.N;
            mc.mu1 = cfg.base.params.mu1.mu;
            mc.mu2 = cfg.base.params.mu2.mu;
            mc.p_min = cfg.map_p_min;
            mc.p_max = cfg.map_p_max;
            mc.q_min = cfg.map_q_min;
            mc.q_max = cfg.map_q_max;
            mc.steps = cfg.map_steps;
            fs::create_directories(out_dir);
            write_region_map_csv(fs::path(out_dir) / "regionmap.csv", region_map(mc));
            return kExitOk;
        }
        throw config_error("no subcommand matched");
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}
