#pragma once

#include <limits>
#include <vector>

namespace siwave {

/// Time series of the blow-up functionals along one run, plus the fitted
/// constants and empirically located thresholds.
struct FunctionalSeries {
    std::vector<double> t;
    std::vector<double> F1, F2, Ft1, Ft2;
    std::vector<double> G1, G2, Gt1, Gt2;
    std::vector<double> L1, L2;
    std::vector<double> nl1, nl2;  // \int |v_t|^p psi_1 dx and \int |u_t|^q psi_2 dx
    std::vector<double> max_ut, max_vt;

    double Cfg1 = 0.0, Cfg2 = 0.0;
    double C_G1 = 0.0, C_G2 = 0.0;    // fitted floors of G_i / eps
    double C_Gt1 = 0.0, C_Gt2 = 0.0;  // fitted floors of Gtilde_i / eps
    double C6 = 0.0;

    double T0_emp = std::numeric_limits<double>::quiet_NaN();
    double T1_emp = std::numeric_limits<double>::quiet_NaN();
    double T2_emp = std::numeric_limits<double>::quiet_NaN();

    std::size_t size() const { return t.size(); }
};

}  // namespace siwave
