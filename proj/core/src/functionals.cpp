#include "siwave/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "siwave/errors.hpp"
#include "siwave/ioutil.hpp"
#include "siwave/specfun.hpp"

namespace siwave {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
    std::ofstream os(file);
    if (!os) throw config_error("cannot write " + file.string());
    os << content;
}

std::string read_text_file(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw config_error("cannot read " + file.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

FunctionalEvaluator::FunctionalEvaluator(const ModelParams& params, const RadialGrid& grid,
                                         QuadratureConfig quad)
    : params_(params), grid_(grid), quad_(quad) {
    params_.validate();
    const std::size_t n = grid_.nodes();
    phi_bar_.resize(n);
    rufactor_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        phi_bar_[j] = phi_radial_scaled(params_.N, grid_.r(j), quad_);
        const double rw = params_.N == 1 ? 1.0 : std::pow(grid_.r(j), params_.N - 1);
        rufactor_[j] = rw * ((j == 0 || j + 1 == n) ? 0.5 : 1.0);
    }
    sphere_ = sphere_surface(params_.N - 1);
}

// trapezoid of field * weight_scale * phi_bar(r) * e^{r + exp_shift} over the
// support cone, with the r^{N-1} surface factor; the cone cut keeps the
// exponent r + exp_shift bounded by R + O(h)
double FunctionalEvaluator::weighted_integral(std::span<const double> field, double t,
                                              double weight_scale, double exp_shift) const {
    const std::size_t n = grid_.nodes();
    const double edge = t + params_.R + 4.0 * grid_.h;
    const std::size_t j_max =
        std::min(n - 1, static_cast<std::size_t>(std::floor(edge / grid_.h)) + 1);
    double acc = 0.0;
    for (std::size_t j = 0; j <= j_max; ++j)
        acc += field[j] * phi_bar_[j] * std::exp(grid_.r(j) + exp_shift) * rufactor_[j];
    return acc * grid_.h * sphere_ * weight_scale;
}

double FunctionalEvaluator::F(const RadialState& state, int which) const {
    const auto& field = which == 1 ? state.u : state.v;
    return weighted_integral(field, state.t, 1.0, -state.t);
}

double FunctionalEvaluator::Ftilde(const RadialState& state, int which) const {
    const auto& field = which == 1 ? state.ut : state.vt;
    return weighted_integral(field, state.t, 1.0, -state.t);
}

double FunctionalEvaluator::G(const RadialState& state, int which) const {
    const auto& field = which == 1 ? state.u : state.v;
    const double mu = which == 1 ? params_.mu1.mu : params_.mu2.mu;
    return weighted_integral(field, state.t, rho_scaled(mu, state.t, quad_), -state.t - 1.0);
}

double FunctionalEvaluator::Gtilde(const RadialState& state, int which) const {
    const auto& field = which == 1 ? state.ut : state.vt;
    const double mu = which == 1 ? params_.mu1.mu : params_.mu2.mu;
    return weighted_integral(field, state.t, rho_scaled(mu, state.t, quad_), -state.t - 1.0);
}

double FunctionalEvaluator::nonlinear_integral(const RadialState& state, int which) const {
    const auto& field = which == 1 ? state.vt : state.ut;
    const double e = which == 1 ? params_.pq.p : params_.pq.q;
    const double mu = which == 1 ? params_.mu1.mu : params_.mu2.mu;
    static thread_local std::vector<double> powered;
    powered.resize(field.size());
    for (std::size_t j = 0; j < field.size(); ++j)
        powered[j] = e == 2.0 ? field[j] * field[j] : std::pow(std::abs(field[j]), e);
    return weighted_integral(powered, state.t, rho_scaled(mu, state.t, quad_), -state.t - 1.0);
}

double FunctionalEvaluator::profile_phi_integral(std::span<const double> profile) const {
    // data vanish for r >= R, so cut there and keep e^r on scale
    const std::size_t n = grid_.nodes();
    const std::size_t j_max =
        std::min(n - 1, static_cast<std::size_t>(std::ceil(params_.R / grid_.h)) + 2);
    double acc = 0.0;
    for (std::size_t j = 0; j <= j_max; ++j)
        acc += profile[j] * phi_bar_[j] * std::exp(grid_.r(j)) * rufactor_[j];
    return acc * grid_.h * sphere_;
}

double FunctionalEvaluator::Cfg_constant(const InitialData& data, int which) const {
    const auto& f = which == 1 ? data.f1 : data.f2;
    const auto& g = which == 1 ? data.g1 : data.g2;
    const double mu = which == 1 ? params_.mu1.mu : params_.mu2.mu;
    // mu - rho'(0)/rho(0) = K_{(mu+1)/2}(1) / K_{(mu-1)/2}(1)
    const double kp = modified_bessel_k_scaled(0.5 * (mu + 1.0), 1.0, quad_);
    const double km = modified_bessel_k_scaled(0.5 * (mu - 1.0), 1.0, quad_);
    const double rho0 = rho(mu, 0.0, quad_);
    const double value =
        rho0 * ((kp / km) * profile_phi_integral(f) + profile_phi_integral(g));
    if (!(value > 0.0))
        throw data_admissibility_error(
            "C(f,g) is nonpositive: the data violate the sign hypotheses");
    return value;
}

void FunctionalEvaluator::sample(const RadialState& state, FunctionalSeries& series) const {
    series.t.push_back(state.t);
    series.F1.push_back(F(state, 1));
    series.F2.push_back(F(state, 2));
    series.Ft1.push_back(Ftilde(state, 1));
    series.Ft2.push_back(Ftilde(state, 2));
    series.G1.push_back(G(state, 1));
    series.G2.push_back(G(state, 2));
    series.Gt1.push_back(Gtilde(state, 1));
    series.Gt2.push_back(Gtilde(state, 2));
    series.nl1.push_back(nonlinear_integral(state, 1));
    series.nl2.push_back(nonlinear_integral(state, 2));
    double mu = 0.0, mv = 0.0;
    for (double x : state.ut) mu = std::max(mu, std::abs(x));
    for (double x : state.vt) mv = std::max(mv, std::abs(x));
    series.max_ut.push_back(mu);
    series.max_vt.push_back(mv);
    series.L1.push_back(0.0);  // filled by finalize_series / accumulate_L
    series.L2.push_back(0.0);
}

namespace {

// first sample index i with t_i > t_min such that value stays positive on
// [t_i, window_end]; returns -1 if none
int first_passage_positive(const std::vector<double>& t, const std::vector<double>& a,
                           const std::vector<double>& b, double t_min, double window_end) {
    int candidate = -1;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] > window_end) break;
        if (t[i] <= t_min) continue;
        const bool ok = a[i] > 0.0 && b[i] > 0.0;
        if (ok && candidate < 0) candidate = static_cast<int>(i);
        if (!ok) candidate = -1;
    }
    return candidate;
}

double window_min_ratio(const std::vector<double>& t, const std::vector<double>& val, double from,
                        double window_end, double eps) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < from || t[i] > window_end) continue;
        m = std::min(m, val[i] / eps);
    }
    return std::isfinite(m) ? m : 0.0;
}

}  // namespace

void accumulate_L(FunctionalSeries& series, const ModelParams& params, double T2,
                  const QuadratureConfig& quad) {
    const double t_gamma =
        std::max(gamma_window_start(params.mu1.mu, quad), gamma_window_start(params.mu2.mu, quad));
    if (T2 + 1e-12 < t_gamma)
        throw config_error("accumulate_L: T2 does not satisfy the Gamma window criteria");
    if (series.nl1.size() != series.size() || series.nl2.size() != series.size())
        throw config_error("accumulate_L: nonlinear integrand columns are missing");

    const double base = series.C6 * params.eps / 8.0;
    series.L1.assign(series.size(), base);
    series.L2.assign(series.size(), base);
    double l1 = base, l2 = base;
    bool started = false;
    std::size_t prev = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series.t[i] < T2) {
            series.L1[i] = base;
            series.L2[i] = base;
            continue;
        }
        if (started) {
            const double dt = series.t[i] - series.t[prev];
            l1 += 0.125 * 0.5 * (series.nl1[prev] + series.nl1[i]) * dt;
            l2 += 0.125 * 0.5 * (series.nl2[prev] + series.nl2[i]) * dt;
        }
        series.L1[i] = l1;
        series.L2[i] = l2;
        started = true;
        prev = i;
    }
}

void finalize_series(FunctionalSeries& series, const ModelParams& params, double window_end,
                     const QuadratureConfig& quad) {
    const double eps = params.eps;
    if (series.size() == 0) return;

    double t_gamma =
        std::max(gamma_window_start(params.mu1.mu, quad), gamma_window_start(params.mu2.mu, quad));

    if (eps > 0.0) {
        const int i0 =
            first_passage_positive(series.t, series.G1, series.G2, 1.0, window_end);
        if (i0 >= 0) {
            series.T0_emp = series.t[static_cast<std::size_t>(i0)];
            series.C_G1 = window_min_ratio(series.t, series.G1, series.T0_emp, window_end, eps);
            series.C_G2 = window_min_ratio(series.t, series.G2, series.T0_emp, window_end, eps);
        }
        const int i1 =
            first_passage_positive(series.t, series.Gt1, series.Gt2, 1.0, window_end);
        if (i1 >= 0) {
            series.T1_emp = series.t[static_cast<std::size_t>(i1)];
            series.C_Gt1 = window_min_ratio(series.t, series.Gt1, series.T1_emp, window_end, eps);
            series.C_Gt2 = window_min_ratio(series.t, series.Gt2, series.T1_emp, window_end, eps);
        }
        series.C6 = std::min({series.Cfg1, series.Cfg2, 8.0 * series.C_Gt1, 8.0 * series.C_Gt2});
        if (!(series.C6 > 0.0)) series.C6 = 0.0;
    } else {
        series.C6 = 0.0;
    }

    // T2: strictly past T1 and inside the Gamma window, snapped to a sample
    double t2_floor = t_gamma;
    if (std::isfinite(series.T1_emp)) t2_floor = std::max(t2_floor, series.T1_emp);
    double T2 = std::numeric_limits<double>::quiet_NaN();
    for (double ts : series.t) {
        if (ts > t2_floor) {
            T2 = ts;
            break;
        }
    }
    if (std::isfinite(T2)) {
        series.T2_emp = T2;
        accumulate_L(series, params, T2, quad);
    } else {
        // run too short to open the L window; keep the flat base value
        series.T2_emp = std::numeric_limits<double>::quiet_NaN();
        series.L1.assign(series.size(), series.C6 * eps / 8.0);
        series.L2.assign(series.size(), series.C6 * eps / 8.0);
    }
}

namespace {

// trapezoid of phi_bar(x)^power e^{power(x - t - 1)} x^{N-1} over [0, t+R],
// which is the cone integral of (phi e^{-(1+t)})^power
double cone_integral(int N, double t, double R, const QuadratureConfig& quad, std::size_t points,
                     double power) {
    const double upper = t + R;
    if (points == 0)
        points = static_cast<std::size_t>(std::max(2048.0, 64.0 * upper));
    const double dx = upper / static_cast<double>(points);
    double acc = 0.0;
    for (std::size_t j = 0; j <= points; ++j) {
        const double x = dx * static_cast<double>(j);
        const double pb = phi_radial_scaled(N, x, quad);
        const double val = std::pow(pb, power) * std::exp(power * (x - t - 1.0)) *
                           (N == 1 ? 1.0 : std::pow(x, N - 1));
        acc += val * ((j == 0 || j == points) ? 0.5 : 1.0);
    }
    return acc * dx * sphere_surface(N - 1);
}

}  // namespace

double psi_power_integral(double mu, int N, double r_exponent, double t, double R,
                          const QuadratureConfig& quad, std::size_t points) {
    if (!(r_exponent > 1.0))
        throw std::domain_error("psi_power_integral: exponent must exceed 1");
    if (t < 0.0) throw std::domain_error("psi_power_integral: t must be nonnegative");
    if (!(R > 0.0)) throw std::domain_error("psi_power_integral: R must be positive");
    const double rb = rho_scaled(mu, t, quad);
    return std::pow(rb, r_exponent) * cone_integral(N, t, R, quad, points, r_exponent);
}

double psi_mixed_integral(double mu_a, double mu_b, double e, int N, double t, double R,
                          const QuadratureConfig& quad, std::size_t points) {
    if (!(e > 1.0)) throw std::domain_error("psi_mixed_integral: exponent must exceed 1");
    const double ea = e / (e - 1.0), eb = 1.0 / (e - 1.0);
    const double ra = rho_scaled(mu_a, t, quad), rb = rho_scaled(mu_b, t, quad);
    // the phi powers collapse: e/(e-1) - 1/(e-1) = 1
    return std::pow(ra, ea) * std::pow(rb, -eb) * cone_integral(N, t, R, quad, points, 1.0);
}

// ---------------------------------------------------------------------------
// run artifacts

void write_series_csv(const std::filesystem::path& file, const FunctionalSeries& s) {
    std::string out = "t,F1,F2,Ft1,Ft2,G1,G2,Gt1,Gt2,L1,L2,max_ut,max_vt\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += format_double(s.t[i]);
        for (const auto* col : {&s.F1, &s.F2, &s.Ft1, &s.Ft2, &s.G1, &s.G2, &s.Gt1, &s.Gt2, &s.L1,
                                &s.L2, &s.max_ut, &s.max_vt}) {
            out += ',';
            out += format_double((*col)[i]);
        }
        out += '\n';
    }
    write_text_file(file, out);
}

FunctionalSeries read_series_csv(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw config_error("cannot read " + file.string());
    std::string line;
    if (!std::getline(is, line)) throw config_error("empty series file " + file.string());
    FunctionalSeries s;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 13) throw config_error("bad series row in " + file.string());
        s.t.push_back(std::stod(cells[0]));
        s.F1.push_back(std::stod(cells[1]));
        s.F2.push_back(std::stod(cells[2]));
        s.Ft1.push_back(std::stod(cells[3]));
        s.Ft2.push_back(std::stod(cells[4]));
        s.G1.push_back(std::stod(cells[5]));
        s.G2.push_back(std::stod(cells[6]));
        s.Gt1.push_back(std::stod(cells[7]));
        s.Gt2.push_back(std::stod(cells[8]));
        s.L1.push_back(std::stod(cells[9]));
        s.L2.push_back(std::stod(cells[10]));
        s.max_ut.push_back(std::stod(cells[11]));
        s.max_vt.push_back(std::stod(cells[12]));
    }
    return s;
}

void write_constants_json(const std::filesystem::path& file, const RunRecord& r) {
    json j;
    j["schema_version"] = 1;
    j["Cfg1"] = r.series.Cfg1;
    j["Cfg2"] = r.series.Cfg2;
    j["C6"] = r.series.C6;
    j["C_G1"] = r.series.C_G1;
    j["C_G2"] = r.series.C_G2;
    j["C_Gt1"] = r.series.C_Gt1;
    j["C_Gt2"] = r.series.C_Gt2;
    j["T0_emp"] = r.series.T0_emp;
    j["T1_emp"] = r.series.T1_emp;
    j["T2_emp"] = r.series.T2_emp;
    j["If1"] = r.If1;
    j["If2"] = r.If2;
    j["Ig1"] = r.Ig1;
    j["Ig2"] = r.Ig2;
    j["eps"] = r.params.eps;
    j["N"] = r.params.N;
    j["mu1"] = r.params.mu1.mu;
    j["mu2"] = r.params.mu2.mu;
    j["p"] = r.params.pq.p;
    j["q"] = r.params.pq.q;
    j["R"] = r.params.R;
    j["h"] = r.h;
    j["status"] = to_string(r.status);
    j["T_blowup"] = r.T_blowup;
    j["horizon"] = r.horizon;
    j["window_end"] = r.window_end;
    write_text_file(file, j.dump(2) + "\n");
}

void write_outcome_json(const std::filesystem::path& file, const RunOutcome& o, double eps) {
    json j;
    j["schema_version"] = 1;
    j["status"] = to_string(o.status);
    j["T_blowup"] = o.status == RunStatus::blew_up ? json(o.T_blowup) : json(nullptr);
    j["horizon"] = o.horizon;
    j["peak_ut"] = o.peak_ut;
    j["peak_vt"] = o.peak_vt;
    j["cone_ok"] = o.cone_ok;
    j["eps"] = eps;
    j["series"] = "series.csv";
    write_text_file(file, j.dump(2) + "\n");
}

RunRecord write_run(const std::filesystem::path& dir, const ModelParams& params, double horizon,
                    const GridConfig& grid_cfg, const QuadratureConfig& quad) {
    std::filesystem::create_directories(dir);
    const RunOutcome outcome = run_until_blowup(params, horizon, grid_cfg, quad);

    RunRecord rec;
    rec.params = params;
    rec.series = outcome.series;
    rec.status = outcome.status;
    rec.T_blowup = outcome.status == RunStatus::blew_up
                       ? outcome.T_blowup
                       : std::numeric_limits<double>::quiet_NaN();
    rec.horizon = horizon;
    rec.window_end =
        outcome.status == RunStatus::blew_up ? 0.9 * outcome.T_blowup : horizon;
    rec.If1 = outcome.If1;
    rec.If2 = outcome.If2;
    rec.Ig1 = outcome.Ig1;
    rec.Ig2 = outcome.Ig2;
    rec.h = grid_cfg.h;

    write_series_csv(dir / "series.csv", rec.series);
    write_constants_json(dir / "constants.json", rec);
    write_outcome_json(dir / "outcome.json", outcome, params.eps);
    return rec;
}

RunRecord load_run(const std::filesystem::path& dir) {
    RunRecord rec;
    rec.series = read_series_csv(dir / "series.csv");
    const json j = json::parse(read_text_file(dir / "constants.json"));
    rec.series.Cfg1 = j.at("Cfg1").get<double>();
    rec.series.Cfg2 = j.at("Cfg2").get<double>();
    rec.series.C6 = j.at("C6").get<double>();
    rec.series.C_G1 = j.at("C_G1").get<double>();
    rec.series.C_G2 = j.at("C_G2").get<double>();
    rec.series.C_Gt1 = j.at("C_Gt1").get<double>();
    rec.series.C_Gt2 = j.at("C_Gt2").get<double>();
    auto get_or_nan = [&](const char* key) {
        return j.at(key).is_null() ? std::numeric_limits<double>::quiet_NaN()
                                   : j.at(key).get<double>();
    };
    rec.series.T0_emp = get_or_nan("T0_emp");
    rec.series.T1_emp = get_or_nan("T1_emp");
    rec.series.T2_emp = get_or_nan("T2_emp");
    rec.If1 = j.at("If1").get<double>();
    rec.If2 = j.at("If2").get<double>();
    rec.Ig1 = j.at("Ig1").get<double>();
    rec.Ig2 = j.at("Ig2").get<double>();
    rec.params.eps = j.at("eps").get<double>();
    rec.params.N = j.at("N").get<int>();
    rec.params.mu1.mu = j.at("mu1").get<double>();
    rec.params.mu2.mu = j.at("mu2").get<double>();
    rec.params.pq.p = j.at("p").get<double>();
    rec.params.pq.q = j.at("q").get<double>();
    rec.params.R = j.at("R").get<double>();
    rec.h = j.at("h").get<double>();
    rec.status = run_status_from_string(j.at("status").get<std::string>());
    rec.T_blowup = get_or_nan("T_blowup");
    rec.horizon = j.at("horizon").get<double>();
    rec.window_end = j.at("window_end").get<double>();
    return rec;
}

}  // namespace siwave
