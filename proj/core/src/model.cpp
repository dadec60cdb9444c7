#include "siwave/model.hpp"

#include <cmath>
#include <stdexcept>

#include "siwave/errors.hpp"

namespace siwave {

void ExponentPair::validate() const {
    if (!(p > 1.0) || !(q > 1.0)) throw std::domain_error("ExponentPair: p and q must exceed 1");
}

double DampingProfile::delta(double t) const {
    if (perturb_t.empty()) return 0.0;
    if (t <= perturb_t.front()) return perturb_delta.front();
    if (t >= perturb_t.back()) return 0.0;
    auto it = std::lower_bound(perturb_t.begin(), perturb_t.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - perturb_t.begin());
    const double t0 = perturb_t[i - 1], t1 = perturb_t[i];
    const double w = (t - t0) / (t1 - t0);
    return (1.0 - w) * perturb_delta[i - 1] + w * perturb_delta[i];
}

double DampingProfile::perturbation_integral() const {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < perturb_t.size(); ++i)
        acc += 0.5 * (perturb_delta[i] + perturb_delta[i + 1]) * (perturb_t[i + 1] - perturb_t[i]);
    return acc;
}

void DampingProfile::validate() const {
    if (mu < 0.0) throw std::domain_error("DampingProfile: mu must be nonnegative");
    if (perturb_t.size() != perturb_delta.size())
        throw config_error("DampingProfile: perturbation tables differ in length");
    for (std::size_t i = 0; i + 1 < perturb_t.size(); ++i)
        if (!(perturb_t[i] < perturb_t[i + 1]))
            throw config_error("DampingProfile: perturbation times must increase");
    if (has_perturbation() && !std::isfinite(perturbation_integral()))
        throw config_error("DampingProfile: perturbation integral is not finite");
}

void ModelParams::validate() const {
    if (N < 1) throw std::domain_error("ModelParams: N must be >= 1");
    if (!(R > 0.0)) throw std::domain_error("ModelParams: R must be positive");
    if (eps < 0.0) throw std::domain_error("ModelParams: eps must be nonnegative");
    if (f1_scale < 0.0 || f2_scale < 0.0 || g1_scale < 0.0 || g2_scale < 0.0)
        throw std::domain_error("ModelParams: profile scales must be nonnegative");
    pq.validate();
    mu1.validate();
    mu2.validate();
}

}  // namespace siwave
