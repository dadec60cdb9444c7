#include "siwave/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "siwave/errors.hpp"

namespace siwave {

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("least_squares: size mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("least_squares: need at least two points");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

double quadratic_curvature(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 3) return 0.0;
    // normal equations for y = c0 + c1 x + c2 x^2, centered for conditioning
    double mx = 0;
    for (double v : x) mx += v;
    mx /= n;
    double s1 = 0, s2 = 0, s3 = 0, s4 = 0, sy = 0, sxy = 0, sx2y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = x[i] - mx;
        s1 += u;
        s2 += u * u;
        s3 += u * u * u;
        s4 += u * u * u * u;
        sy += y[i];
        sxy += u * y[i];
        sx2y += u * u * y[i];
    }
    const double m = static_cast<double>(n);
    // solve [m s1 s2; s1 s2 s3; s2 s3 s4] c = [sy sxy sx2y] by Cramer
    const double det = m * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s3 * s2) +
                       s2 * (s1 * s3 - s2 * s2);
    if (det == 0.0) return 0.0;
    const double det1 = m * (s2 * sx2y - s3 * sxy) - s1 * (s1 * sx2y - s3 * sy) +
                        s2 * (s1 * sxy - s2 * sy);
    const double c2 = det1 / det;
    const double detc1 = m * (sxy * s4 - sx2y * s3) - sy * (s1 * s4 - s3 * s2) +
                         s2 * (s1 * sx2y - s2 * sxy);
    const double c1 = detc1 / det;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double span = *hi - *lo;
    return std::abs(c2) * span / std::max(std::abs(c1), 1e-12);
}

LifespanFit fit_lifespans(std::span<const double> eps, std::span<const double> T,
                          CaseLabel case_label, const ExponentPair& pq) {
    if (eps.size() != T.size()) throw std::invalid_argument("fit_lifespans: size mismatch");
    if (eps.size() < 4) throw config_error("fit_lifespans: need at least 4 lifespans");
    for (std::size_t i = 0; i < T.size(); ++i)
        if (!(T[i] > 0.0) || !(eps[i] > 0.0))
            throw config_error("fit_lifespans: lifespans and eps must be positive");

    LifespanFit out;
    out.case_used = case_label;
    std::vector<double> x(eps.size()), y(eps.size());
    const double pq1 = pq.p * pq.q - 1.0;
    double a = 0.0;
    switch (case_label) {
        case CaseLabel::subcritical_blowup:
        case CaseLabel::outside_proved_region:
            out.x_model = "log(eps)";
            for (std::size_t i = 0; i < eps.size(); ++i) x[i] = std::log(eps[i]);
            break;
        case CaseLabel::critical_blowup:
            a = pq1;
            out.x_model = "eps^-" + std::to_string(a);
            for (std::size_t i = 0; i < eps.size(); ++i) x[i] = std::pow(eps[i], -a);
            break;
        case CaseLabel::doubly_critical_blowup:
            a = std::min(pq1 / (pq.p + 1.0), pq1 / (pq.q + 1.0));
            out.x_model = "eps^-" + std::to_string(a);
            for (std::size_t i = 0; i < eps.size(); ++i) x[i] = std::pow(eps[i], -a);
            break;
    }
    for (std::size_t i = 0; i < T.size(); ++i) y[i] = std::log(T[i]);

    out.fit = least_squares(x, y);
    const auto [lo, hi] = std::minmax_element(eps.begin(), eps.end());
    out.span_decades = std::log10(*hi / *lo);
    out.curvature = quadratic_curvature(x, y);
    out.regime_warning = out.curvature > 0.15;
    return out;
}

}  // namespace siwave
