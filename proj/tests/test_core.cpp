#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mrcmix/distributions.hpp"
#include "mrcmix/params.hpp"
#include "mrcmix/quadrature.hpp"
#include "mrcmix/special.hpp"

#include "support.hpp"

using namespace mrcmix;
using doctest::Approx;

TEST_CASE("constant_C matches direct evaluation of the closed form") {
    CHECK(constant_C(1e-4, 4.0) == Approx(4.9348022005446793e-4).epsilon(1e-12));
    CHECK(constant_C(1e-2, 3.0) == Approx(7.5976250103520752e-2).epsilon(1e-12));
    // Vanishing interferer intensity drives C to zero from above.
    CHECK(constant_C(1e-300, 4.0) > 0.0);
    CHECK(constant_C(1e-300, 4.0) < 1e-295);
}

TEST_CASE("constant_C rejects invalid domains") {
    CHECK_THROWS_AS(constant_C(1e-4, 2.0), std::domain_error);
    CHECK_THROWS_AS(constant_C(1e-4, 1.5), std::domain_error);
    CHECK_THROWS_AS(constant_C(0.0, 4.0), std::domain_error);
    CHECK_THROWS_AS(constant_C(-1e-4, 4.0), std::domain_error);
}

TEST_CASE("constant_B matches direct evaluation and zero cases") {
    const double T_1db = std::pow(10.0, 0.1);
    CHECK(constant_B(1e-4, 10.0, T_1db, 4.0) == Approx(0.055369391373410689).epsilon(1e-12));
    CHECK(constant_B(1e-4, 10.0, 1.0, 4.0) == Approx(0.049348022005446793).epsilon(1e-12));
    CHECK(constant_B(1e-4, 10.0, 0.0, 4.0) == 0.0);
    CHECK(constant_B(0.0, 10.0, T_1db, 4.0) == 0.0);
    CHECK_THROWS_AS(constant_B(1e-4, 10.0, 1.0, 2.0), std::domain_error);
}

TEST_CASE("derived_constants bundles C and B") {
    SystemParams params;  // defaults: lambda 1e-4, p 1, alpha 4, d 10
    const double T_1db = std::pow(10.0, 0.1);
    const DerivedConstants dc = derived_constants(params, T_1db);
    CHECK(dc.C == Approx(4.9348022005446793e-4).epsilon(1e-12));
    CHECK(dc.B == Approx(0.055369391373410689).epsilon(1e-12));
}

TEST_CASE("factorial and binomial basics") {
    CHECK(factorial(0) == 1.0);
    CHECK(factorial(5) == 120.0);
    CHECK(factorial(20) == Approx(2432902008176640000.0).epsilon(1e-15));
    CHECK(binomial(10, 3) == 120.0);
    CHECK(binomial(8, 0) == 1.0);
    CHECK(binomial(8, 8) == 1.0);
    CHECK(binomial(5, 7) == 0.0);
    CHECK(binomial(52, 26) == Approx(495918532948104.0).epsilon(1e-12));
    CHECK_THROWS_AS(factorial(-1), std::domain_error);
    CHECK_THROWS_AS(binomial(-2, 1), std::domain_error);
}

TEST_CASE("partial Bell polynomial fixed values") {
    const std::vector<double> single{1.0, 2.0, 5.0};
    CHECK(partial_bell(3, 1, single) == 5.0);  // B_{m,1} = x_m
    const std::vector<double> two{2.0, 3.0};
    CHECK(partial_bell(3, 2, two) == Approx(18.0).epsilon(1e-14));  // 3 x1 x2
    const std::vector<double> ones3{1.0, 1.0, 1.0};
    CHECK(partial_bell(4, 2, ones3) == Approx(7.0).epsilon(1e-14));  // 4 x1 x3 + 3 x2^2
    const std::vector<double> ones4{1.0, 1.0, 1.0, 1.0};
    CHECK(partial_bell(6, 3, ones4) == Approx(90.0).epsilon(1e-14));
    const std::vector<double> ramp{1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(partial_bell(7, 3, ramp) == Approx(2835.0).epsilon(1e-13));
    CHECK(partial_bell(0, 0, {}) == 1.0);
    const std::vector<double> any{1.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(partial_bell(4, 0, any) == 0.0);
}

TEST_CASE("partial Bell polynomial argument errors") {
    const std::vector<double> xs{1.0, 2.0};
    CHECK_THROWS_AS(partial_bell(2, 3, xs), std::invalid_argument);
    CHECK_THROWS_AS(partial_bell(5, 2, xs), std::invalid_argument);  // needs 4 entries
    CHECK_THROWS_AS(partial_bell(-1, 0, xs), std::invalid_argument);
}

TEST_CASE("partial Bell identities and recurrence on random arguments") {
    testsupport::OracleRng rng(7001);
    for (int m = 1; m <= 8; ++m) {
        std::vector<double> xs;
        for (int i = 0; i <= m; ++i) xs.push_back(2.0 * rng.uniform01() - 0.5);

        // B_{m,1} = x_m and B_{m,m} = x_1^m.
        CHECK(partial_bell(m, 1, xs) ==
              Approx(xs[static_cast<std::size_t>(m - 1)]).epsilon(1e-12));
        CHECK(partial_bell(m, m, xs) == Approx(std::pow(xs[0], m)).epsilon(1e-12));

        // Binomial recurrence, recomputed at the top level.
        for (int j = 1; j <= m; ++j) {
            double sum = 0.0;
            for (int i = 1; i <= m - j + 1; ++i)
                sum += binomial(m - 1, i - 1) * xs[static_cast<std::size_t>(i - 1)] *
                       partial_bell(m - i, j - 1, xs);
            const double direct = partial_bell(m, j, xs);
            CHECK(direct == Approx(sum).epsilon(1e-12));
        }
    }
}

TEST_CASE("partial Bell at all-ones arguments equals Stirling numbers") {
    const std::vector<double> ones(12, 1.0);
    for (int m = 1; m <= 10; ++m)
        for (int j = 1; j <= m; ++j)
            CHECK(partial_bell(m, j, ones) ==
                  Approx(testsupport::stirling2(m, j)).epsilon(1e-12));
}

TEST_CASE("power_derivatives falling-factorial entries") {
    const DerivativeSequence d1 = power_derivatives(1.0, 4.0, 1.0, 2);
    REQUIRE(d1.size() == 2);
    CHECK(d1[0] == Approx(0.5).epsilon(1e-15));
    CHECK(d1[1] == Approx(-0.25).epsilon(1e-15));

    const DerivativeSequence d2 = power_derivatives(2.0, 4.0, 4.0, 1);
    REQUIRE(d2.size() == 1);
    CHECK(d2[0] == Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(power_derivatives(1.0, 4.0, 0.0, 2), std::domain_error);
    CHECK_THROWS_AS(power_derivatives(1.0, 4.0, -1.0, 2), std::domain_error);
}

TEST_CASE("exp_term_derivative frozen values at C=1, alpha=4, s=1") {
    const double e_inv = std::exp(-1.0);
    CHECK(exp_term_derivative(0, 1.0, 4.0, 1.0) == Approx(e_inv).epsilon(1e-14));
    CHECK(exp_term_derivative(1, 1.0, 4.0, 1.0) == Approx(-0.5 * e_inv).epsilon(1e-14));
    CHECK(exp_term_derivative(2, 1.0, 4.0, 1.0) == Approx(0.5 * e_inv).epsilon(1e-14));
    CHECK(exp_term_derivative(3, 1.0, 4.0, 1.0) ==
          Approx(-7.0 / 8.0 * e_inv).epsilon(1e-13));
    CHECK(exp_term_derivative(4, 1.0, 4.0, 1.0) ==
          Approx(37.0 / 16.0 * e_inv).epsilon(1e-13));
    CHECK(exp_term_derivative(5, 1.0, 4.0, 1.0) ==
          Approx(-133.0 / 16.0 * e_inv).epsilon(1e-13));
}

TEST_CASE("exp_term_derivative frozen values off the default parameters") {
    CHECK(exp_term_derivative(3, 2.0, 3.0, 5.0) ==
          Approx(-1.7588494388509400e-3).epsilon(1e-12));
    CHECK(exp_term_derivative(4, 1.5, 6.0, 0.5) ==
          Approx(11.483982392328431).epsilon(1e-12));
    CHECK_THROWS_AS(exp_term_derivative(2, 1.0, 4.0, 0.0), std::domain_error);
}

TEST_CASE("exp_term_derivative agrees with central finite differences") {
    for (double alpha : {3.0, 4.0, 6.0}) {
        for (double C : {0.5, 2.0}) {
            for (double s : {0.1, 1.0, 10.0, 100.0}) {
                auto f = [&](long double x) -> long double {
                    return std::exp(-static_cast<long double>(C) *
                                    std::pow(x, 2.0L / static_cast<long double>(alpha)));
                };
                for (int m = 1; m <= 5; ++m) {
                    const long double h = testsupport::fd_spacing(C, alpha, s);
                    const double reference =
                        static_cast<double>(testsupport::fd_derivative(f, s, m, h));
                    const double value = exp_term_derivative(m, C, alpha, s);
                    INFO("alpha=", alpha, " C=", C, " s=", s, " m=", m);
                    // True relative error; Approx's absolute scale term
                    // would mask deviations on tiny magnitudes.
                    CHECK(std::abs(value - reference) <= 1e-5 * std::abs(reference));
                }
            }
        }
    }
}

TEST_CASE("cdf_U frozen values") {
    CHECK(cdf_U(1.0, 2, 1.0, 4.0) == Approx(0.44818083824283652).epsilon(1e-12));
    CHECK(cdf_U(1.0, 3, 1.0, 4.0) == Approx(0.35621097794997594).epsilon(1e-12));
    CHECK(cdf_U(1.0, 4, 1.0, 4.0) == Approx(0.30256189277914060).epsilon(1e-12));
    CHECK(cdf_U(2.0, 3, 0.5, 3.0) == Approx(0.20539814350621488).epsilon(1e-12));
    CHECK(cdf_U(4.0, 5, 0.2, 6.0) == Approx(0.13647316421583945).epsilon(1e-12));
}

TEST_CASE("cdf_U edge behavior") {
    CHECK(cdf_U(0.0, 3, 1.0, 4.0) == 0.0);
    CHECK(cdf_U(0.0, 1, 1.0, 4.0) == 0.0);
    CHECK(cdf_U(5.0, 0, 1.0, 4.0) == 1.0);  // U_0 = 0
    CHECK(cdf_U(0.0, 0, 1.0, 4.0) == 0.0);
    CHECK_THROWS_AS(cdf_U(-1.0, 2, 1.0, 4.0), std::domain_error);
    CHECK_THROWS_AS(cdf_U(1.0, -1, 1.0, 4.0), std::invalid_argument);
}

TEST_CASE("cdf_U with one antenna equals cdf_V pointwise") {
    for (double u = 1e-6; u < 1e7; u *= 10.0) {
        CHECK(cdf_U(u, 1, 0.7, 3.5) == Approx(cdf_V(u, 0.7, 3.5)).epsilon(1e-15));
    }
}

TEST_CASE("cdf_U is a nondecreasing distribution reaching 1") {
    for (int n : {1, 2, 4, 7}) {
        double prev = 0.0;
        for (double u = 1e-4; u <= 1e8; u *= 1.7) {
            const double value = cdf_U(u, n, 1.0, 4.0);
            CHECK(value >= prev);
            CHECK(value >= 0.0);
            CHECK(value <= 1.0);
            prev = value;
        }
        CHECK(cdf_U(1e10, n, 1.0, 4.0) == Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("cdf_V and pdf_V closed forms") {
    CHECK(cdf_V(0.0, 1.0, 4.0) == 0.0);
    CHECK(cdf_V(1.0, 1.0, 4.0) == Approx(0.63212055882855768).epsilon(1e-14));
    CHECK_THROWS_AS(pdf_V(0.0, 1.0, 4.0), std::domain_error);
    CHECK_THROWS_AS(cdf_V(-0.5, 1.0, 4.0), std::domain_error);

    // pdf integrates to the cdf increment on finite intervals.
    const double C = 0.8, alpha = 4.0;
    for (double lo : {0.01, 0.5, 2.0}) {
        const double hi = lo * 3.0;
        const QuadResult integral = integrate_adaptive(
            [&](double v) { return pdf_V(v, C, alpha); }, lo, hi, 1e-12, 1e-14, 200);
        CHECK(integral.value ==
              Approx(cdf_V(hi, C, alpha) - cdf_V(lo, C, alpha)).epsilon(1e-10));
    }
}

TEST_CASE("pdf_V integrates to one after the smoothing substitution") {
    // v = u^(alpha/2) turns the singular density into a smooth one; the
    // integrand below still evaluates pdf_V itself.
    const double C = 1.3, alpha = 4.0;
    auto integrand = [&](double t) {
        const double u = t / (1.0 - t);              // map [0,1) to [0,inf)
        const double jac_map = 1.0 / ((1.0 - t) * (1.0 - t));
        const double v = std::pow(u, alpha / 2.0);
        const double jac_sub = (alpha / 2.0) * std::pow(u, alpha / 2.0 - 1.0);
        if (u == 0.0) return 0.0;
        return pdf_V(v, C, alpha) * jac_sub * jac_map;
    };
    const QuadResult total = integrate_adaptive(integrand, 1e-12, 1.0 - 1e-12, 1e-10, 1e-12, 400);
    CHECK(total.value == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("inverse-transform samples of V match cdf_V (KS at the 1% level)") {
    const double C = 0.9, alpha = 4.0;
    const std::size_t n = 1'000'000;
    testsupport::OracleRng rng(20240601);
    std::vector<double> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        samples.push_back(sample_V(rng.uniform01(), C, alpha));
    const double ks = testsupport::ks_statistic(
        samples, [&](double v) { return cdf_V(v, C, alpha); });
    const double critical = 1.6276 / std::sqrt(static_cast<double>(n));
    CHECK(ks < critical);
}

TEST_CASE("probability clamp warning channel stays quiet in normal use") {
    reset_clamp_warnings();
    for (int n : {1, 3, 6})
        for (double u = 1e-3; u < 1e5; u *= 3.0) cdf_U(u, n, 0.9, 4.0);
    CHECK(clamp_warning_count() == 0);
}

TEST_CASE("parameter validation") {
    SystemParams params;
    params.alpha = 2.0;
    CHECK_THROWS_AS(params.validate(), std::domain_error);
    params = {};
    params.p = 1.5;
    CHECK_THROWS_AS(params.validate(), std::domain_error);
    params = {};
    params.d = 0.0;
    CHECK_THROWS_AS(params.validate(), std::domain_error);
    params = {};
    params.epsilon = -1.0;
    CHECK_THROWS_AS(params.validate(), std::domain_error);

    MixtureConfig cfg;
    cfg.q = 1.2;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
    cfg = {};
    cfg.antennas = 0;
    CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}

TEST_CASE("AUTO window holds 1000 interferers on average") {
    SimConfig sim;
    CHECK(sim.resolved_half_width(1e-2) == Approx(158.11388300841898).epsilon(1e-12));
    CHECK(sim.resolved_half_width(1e-4) == Approx(1581.1388300841897).epsilon(1e-12));
    sim.window_half_width = 50.0;
    CHECK(sim.resolved_half_width(1e-2) == 50.0);
    CHECK(sim.resolved_workers() >= 1);
}
