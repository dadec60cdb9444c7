#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "siwave/fit.hpp"
#include "siwave/model.hpp"

namespace siwave {

/// The coupled integral-inequality pair integrated as an equality:
/// L1' = C1 (1+t)^{alpha_p} L2^p,  L2' = C1 (1+t)^{alpha_q} L1^q, t >= T2.
struct FrameConfig {
    double C1 = 1.0;
    double T2 = 2.0;
    double L1_0 = 0.0;
    double L2_0 = 0.0;
    double alpha_p = 0.0;
    double alpha_q = 0.0;
    double p = 2.0;
    double q = 2.0;
    double divergence_threshold = 1e12;
    double horizon = 1e7;
    double rel_tol = 1e-8;

    void validate() const;
};

/// alpha for the L1 equation: -(N-1)(p-1)/2 + mu_own/2 - mu_other*p/2.
/// (For L2 swap the roles and use q.)
double frame_alpha(int N, double mu_own, double mu_other, double exponent);

/// FrameConfig matching a model instance, with L(T2) = L0_coeff * eps.
FrameConfig make_frame_config(const ModelParams& params, double T2, double L0_coeff,
                              double C1 = 1.0);

enum class FrameStatus { diverged, censored };
std::string to_string(FrameStatus status);

struct FrameResult {
    FrameStatus status = FrameStatus::censored;
    double T_div = std::numeric_limits<double>::quiet_NaN();
    bool sharpness_flag = false;  // step underflow / overflow before threshold
    std::vector<double> sample_t, sample_L1, sample_L2;
};

/// Adaptive embedded 4(5) integration; stops at the divergence threshold
/// (reporting the crossing time) or at the horizon.
FrameResult integrate_frame(const FrameConfig& cfg);
FrameResult integrate_frame(const FrameConfig& cfg, std::span<const double> sample_times);

struct FrameSweepRow {
    double eps = 0.0;
    FrameStatus status = FrameStatus::censored;
    double T_div = std::numeric_limits<double>::quiet_NaN();
};

/// One integration per eps with L1_0 = L2_0 = L0_coeff * eps.
std::vector<FrameSweepRow> frame_sweep(const FrameConfig& base, std::span<const double> eps_list,
                                       double L0_coeff);

/// Scaling fit over frame sweep rows; refuses censored rows, naming them.
LifespanFit frame_exponent_fit(std::span<const FrameSweepRow> rows, CaseLabel case_label,
                               const ExponentPair& pq);

}  // namespace siwave
