#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "siwave/curves.hpp"

using namespace siwave;

TEST_SUITE_BEGIN("curves");

TEST_CASE("glassey exponent") {
    CHECK(glassey_exponent(2) == doctest::Approx(3.0));
    CHECK(glassey_exponent(3) == doctest::Approx(2.0));
    CHECK(std::isinf(glassey_exponent(1)));
    CHECK_THROWS_AS(glassey_exponent(0), std::domain_error);
}

TEST_CASE("sigma shift is piecewise as stated") {
    CHECK(sigma_shift(0.5) == doctest::Approx(1.0));
    CHECK(sigma_shift(1.0) == doctest::Approx(2.0));
    CHECK(sigma_shift(3.0) == doctest::Approx(3.0));
    CHECK(sigma_shift(0.0) == doctest::Approx(0.0));
    CHECK(sigma_shift(1.999) == doctest::Approx(2.0));
    CHECK(sigma_shift(2.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(sigma_shift(-0.1), std::domain_error);
}

TEST_CASE("lambda curve arithmetic") {
    CHECK(lambda_curve(3.0, {2.0, 2.0}) == doctest::Approx(0.0));
    CHECK(lambda_curve(2.0, {2.0, 3.0}) == doctest::Approx(0.1));
    for (double p : {1.5, 2.0, 3.0})
        for (double q : {1.5, 2.5})
            CHECK(lambda_curve(1.0, {p, q}) == doctest::Approx((p + 1.0) / (p * q - 1.0)));
}

TEST_CASE("lambda decreases in the dimension and in q") {
    for (double p : {1.5, 2.0, 3.0}) {
        double prev = lambda_curve(1.0, {p, 2.0});
        for (double D = 1.25; D <= 6.0; D += 0.25) {
            const double cur = lambda_curve(D, {p, 2.0});
            CHECK(cur < prev);
            prev = cur;
        }
        prev = lambda_curve(3.0, {p, 1.1});
        for (double q = 1.2; q <= 5.0; q += 0.1) {
            const double cur = lambda_curve(3.0, {p, q});
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("omega composes the two shifted lambdas") {
    CHECK(omega(1, 0.5, 0.5, {2.0, 2.0}) == doctest::Approx(0.75));
    CHECK(omega(1, sigma_shift(0.5), sigma_shift(0.5), {2.0, 2.0}) == doctest::Approx(0.5));
    // symmetric inputs give equal lambdas
    const RegionClassification rc = classify(2, 0.7, 0.7, 2.5, 2.5);
    CHECK(rc.lambda_pq == doctest::Approx(rc.lambda_qp));
    CHECK_THROWS_AS(omega(1, -0.1, 0.0, {2.0, 2.0}), std::domain_error);
}

TEST_CASE("classify: the three proved cases and the complement") {
    SUBCASE("subcritical") {
        const auto rc = classify(1, 0.5, 0.5, 2.0, 2.0);
        CHECK(rc.case_label == CaseLabel::subcritical_blowup);
        CHECK(rc.lifespan_exponent == doctest::Approx(0.75));
        CHECK(rc.omega_mu == doctest::Approx(0.75));
        CHECK(rc.omega_sigma == doctest::Approx(0.5));
    }
    SUBCASE("doubly critical") {
        const auto rc = classify(3, 0.0, 0.0, 2.0, 2.0);
        CHECK(rc.case_label == CaseLabel::doubly_critical_blowup);
        CHECK(rc.lifespan_exponent == doctest::Approx(1.0));
        // a second instance with positive damping: Lambda(2, 3, 3) = 0
        const auto rc2 = classify(1, 1.0, 1.0, 3.0, 3.0);
        CHECK(rc2.case_label == CaseLabel::doubly_critical_blowup);
        CHECK(rc2.lifespan_exponent == doctest::Approx(8.0 / 4.0));
    }
    SUBCASE("critical with a single vanishing lambda") {
        // Lambda(2, 2, 3.5) = 3/6 - 1/2 = 0 while Lambda(5, 3.5, 2) < 0
        const auto rc = classify(1, 1.0, 4.0, 2.0, 3.5);
        CHECK(rc.lambda_pq == doctest::Approx(0.0));
        CHECK(rc.lambda_qp < 0.0);
        CHECK(rc.case_label == CaseLabel::critical_blowup);
        CHECK(rc.lifespan_exponent == doctest::Approx(2.0 * 3.5 - 1.0));
    }
    SUBCASE("outside the proved region") {
        const auto rc = classify(3, 2.0, 2.0, 4.0, 4.0);
        CHECK(rc.lambda_pq < 0.0);
        CHECK(rc.lambda_qp < 0.0);
        CHECK(rc.case_label == CaseLabel::outside_proved_region);
    }
}

TEST_CASE("the mu shift improves on the sigma shift") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> umu(1e-6, 2.0 - 1e-9), up(1.05, 4.0);
    for (int i = 0; i < 1000; ++i) {
        const ExponentPair pq{up(rng), up(rng)};
        const double mu1 = umu(rng), mu2 = umu(rng);
        const double om = omega(2, mu1, mu2, pq);
        const double os = omega(2, sigma_shift(mu1), sigma_shift(mu2), pq);
        CHECK(om >= os - 1e-14);
    }
    std::uniform_real_distribution<double> ubig(2.0, 6.0);
    for (int i = 0; i < 1000; ++i) {
        const ExponentPair pq{up(rng), up(rng)};
        const double mu1 = ubig(rng), mu2 = ubig(rng);
        CHECK(omega(2, mu1, mu2, pq) ==
              doctest::Approx(omega(2, sigma_shift(mu1), sigma_shift(mu2), pq)).epsilon(1e-14));
    }
}

TEST_CASE("classification ignores the data size") {
    ModelParams a;
    a.N = 1;
    a.mu1.mu = 0.5;
    a.mu2.mu = 0.5;
    a.pq = {2.0, 2.0};
    ModelParams b = a;
    b.eps = 123.0;
    const auto ra = classify(a), rb = classify(b);
    CHECK(ra.omega_mu == rb.omega_mu);
    CHECK(ra.omega_sigma == rb.omega_sigma);
    CHECK(ra.case_label == rb.case_label);
    CHECK(ra.lifespan_exponent == rb.lifespan_exponent);
}

TEST_CASE("mixed-damping reduction sets one shift to zero") {
    const auto rc = classify(2, 1.0, 0.0, 2.0, 2.5);
    CHECK(rc.lambda_qp == doctest::Approx(lambda_curve(2.0, {2.5, 2.0})));
}

TEST_CASE("case labels round-trip through strings") {
    for (auto label : {CaseLabel::subcritical_blowup, CaseLabel::critical_blowup,
                       CaseLabel::doubly_critical_blowup, CaseLabel::outside_proved_region})
        CHECK(case_label_from_string(to_string(label)) == label);
    CHECK_THROWS_AS(case_label_from_string("nonsense"), std::domain_error);
}

TEST_SUITE_END();
