#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "siwave/config.hpp"
#include "siwave/curves.hpp"
#include "siwave/fit.hpp"
#include "siwave/frame.hpp"
#include "siwave/functionals.hpp"
#include "siwave/solver.hpp"

namespace siwave {

struct SolveConfig {
    ModelParams params;
    GridConfig grid;
    double horizon = 50.0;
    QuadratureConfig quad;
};

/// Recognized keys: N, mu1, mu2, p, q, R, eps, h, horizon, blowup_threshold,
/// sampling_dt, plus the optional ones documented in the README.
SolveConfig parse_solve_config(const KeyValueConfig& kv);

struct SweepConfig {
    SolveConfig base;
    std::vector<double> eps_list;
    int jobs = 1;
    double frame_C1 = 1.0;  // 0: calibrate from the first run's Hoelder constant
    double frame_threshold = 1e12;
    double frame_horizon = 1e7;
    double map_p_min = 1.1, map_p_max = 4.0;
    double map_q_min = 1.1, map_q_max = 4.0;
    int map_steps = 30;
    std::string config_text;
};

SweepConfig parse_sweep_config(const KeyValueConfig& kv);

struct FrameRunConfig {
    FrameConfig frame;
    ExponentPair pq;
    CaseLabel case_label = CaseLabel::subcritical_blowup;
    std::vector<double> eps_list;
    double L0_coeff = 0.125;
    std::string config_text;
};

FrameRunConfig parse_frame_config(const KeyValueConfig& kv);

struct RunSummary {
    double eps = 0.0;
    RunStatus status = RunStatus::censored;
    double T = 0.0;  // blow-up time, or the horizon for censored runs
    double peak_ut = 0.0, peak_vt = 0.0;
    bool cone_ok = true;
};

struct RegionMapRow {
    double p = 0.0, q = 0.0;
    double omega_mu = 0.0, omega_sigma = 0.0;
    CaseLabel label = CaseLabel::outside_proved_region;
};

struct RegionMapConfig {
    int N = 1;
    double mu1 = 0.0, mu2 = 0.0;
    double p_min = 1.1, p_max = 4.0, q_min = 1.1, q_max = 4.0;
    int steps = 30;
};

std::vector<RegionMapRow> region_map(const RegionMapConfig& cfg);
void write_region_map_csv(const std::filesystem::path& file,
                          std::span<const RegionMapRow> rows);

struct ExperimentReport {
    int schema_version = 1;

    int N = 1;
    double mu1 = 0.0, mu2 = 0.0, p = 2.0, q = 2.0, R = 1.0;
    std::vector<double> eps_list;
    std::vector<RunSummary> runs;

    RegionClassification classification;
    double paper_exponent = 0.0;  // the Theorem's literal -Omega

    bool pde_fit_valid = false;
    LifespanFit pde_fit;
    bool frame_fit_valid = false;
    LifespanFit frame_fit;
    std::string frame_fit_note;
    std::vector<FrameSweepRow> frame_rows;

    bool agreement_valid = false;
    double agreement_ratio = 0.0;  // pde slope / frame slope

    double frame_C1_used = 0.0;
    double frame_T2 = 0.0;
    double frame_L0_coeff = 0.0;
    // T_div of the middle eps when C1 scans a decade either side
    std::vector<std::pair<double, double>> frame_sensitivity;

    std::string config_hash;
    double h = 0.0, cfl = 0.0, sampling_dt = 0.0;

    nlohmann::json to_json() const;
};

ExperimentReport sweep(const SweepConfig& cfg);

/// report.json + lifespan.csv + regionmap.csv, plot-ready and deterministic.
void emit_report(const ExperimentReport& report, std::span<const RegionMapRow> map_rows,
                 const std::filesystem::path& dir);

void write_frame_csv(const std::filesystem::path& file, std::span<const FrameSweepRow> rows);
void write_fit_json(const std::filesystem::path& file, const LifespanFit& fit);

}  // namespace siwave
