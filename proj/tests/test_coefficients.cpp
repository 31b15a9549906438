#include <doctest.h>

#include <cmath>
#include <complex>

#include "bellkit/coefficients.hpp"
#include "bellkit/scenario.hpp"

using namespace bellkit;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("coefficients") {

TEST_CASE("generating function") {
    // g_m(x) = cot(pi (x + 1/2m) / d)
    CHECK(coefficient_g(2, 0.0, 2) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(coefficient_g(2, 1.0, 2) ==
          doctest::Approx(1.0 / std::tan(5.0 * kPi / 8.0)).epsilon(1e-13));
}

TEST_CASE("vector shapes") {
    for (int m : {2, 3}) {
        for (int d : {2, 3, 4, 5}) {
            const CoefficientSet c = make_coefficients(Scenario(2, m, d));
            CHECK(c.alpha.size() == static_cast<std::size_t>(d / 2));
            CHECK(c.beta.size() == static_cast<std::size_t>(d / 2));
            CHECK(c.alpha_hat.size() == static_cast<std::size_t>(d));
            CHECK(c.a.size() == static_cast<std::size_t>(d - 1));
        }
    }
}

TEST_CASE("reference values") {
    // alpha_0 = (1/2d) tan(pi/2m) [g(0) - g(floor(d/2))]
    const CoefficientSet c22 = make_coefficients(Scenario(2, 2, 2));
    CHECK(c22.alpha[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::abs(c22.beta[0]) <= 1e-15);
    CHECK(c22.shift == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

    const CoefficientSet c23 = make_coefficients(Scenario(2, 2, 3));
    CHECK(c23.alpha[0] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(c23.beta[0] == doctest::Approx(0.21132486540518713).epsilon(1e-14));
    CHECK(c23.shift == doctest::Approx(0.36602540378443871).epsilon(1e-14));

    const CoefficientSet c32 = make_coefficients(Scenario(2, 3, 2));
    CHECK(c32.alpha[0] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));

    CHECK(make_coefficients(Scenario(2, 3, 4)).alpha[0] ==
          doctest::Approx(0.55767753582520529).epsilon(1e-14));
    CHECK(make_coefficients(Scenario(2, 4, 3)).alpha[0] ==
          doctest::Approx(0.49578191578136044).epsilon(1e-14));
    CHECK(make_coefficients(Scenario(2, 2, 4)).beta[0] ==
          doctest::Approx(0.16221167441072887).epsilon(1e-14));
    CHECK(make_coefficients(Scenario(2, 3, 3)).beta[0] ==
          doctest::Approx(0.11576545177795355).epsilon(1e-14));
}

TEST_CASE("correlator coefficients") {
    // a_k = exp(i pi (2k - d) / (2 m d)) / (2 cos(pi/2m))
    const CoefficientSet c = make_coefficients(Scenario(2, 2, 3));
    const cplx expected = std::exp(cplx{0.0, -kPi / 12.0}) / std::sqrt(2.0);
    CHECK(std::abs(c.a[0] - expected) <= 1e-15);
    CHECK(c.a[0].real() == doctest::Approx(0.6830127018922193).epsilon(1e-14));
    CHECK(c.a[0].imag() == doctest::Approx(-0.1830127018922193).epsilon(1e-14));

    SUBCASE("Hermitian pairing a_{d-k} = conj(a_k)") {
        for (int m : {2, 3, 4}) {
            for (int d : {2, 3, 4, 5, 6}) {
                const CoefficientSet cs = make_coefficients(Scenario(2, m, d));
                for (int k = 1; k < d; ++k)
                    CHECK(std::abs(cs.a[static_cast<std::size_t>(d - k - 1)] -
                                   std::conj(cs.a[static_cast<std::size_t>(k - 1)])) <= 1e-15);
            }
        }
    }
}

TEST_CASE("merged vector layout") {
    const CoefficientSet c4 = make_coefficients(Scenario(2, 2, 4));
    REQUIRE(c4.alpha_hat.size() == 4);
    CHECK(c4.alpha_hat[0] == c4.alpha[0]);
    CHECK(c4.alpha_hat[1] == c4.alpha[1]);
    CHECK(c4.alpha_hat[2] == -c4.beta[1]);
    CHECK(c4.alpha_hat[3] == -c4.beta[0]);

    const CoefficientSet c5 = make_coefficients(Scenario(2, 2, 5));
    REQUIRE(c5.alpha_hat.size() == 5);
    CHECK(c5.alpha_hat[2] == 0.0);  // middle class carries no weight for odd d
    CHECK(c5.alpha_hat[4] == -c5.beta[0]);
}

TEST_CASE("shift identities") {
    for (int m : {2, 3, 4}) {
        for (int d : {2, 3, 4, 5, 6, 7}) {
            const CoefficientSet c = make_coefficients(Scenario(2, m, d));
            double sum = 0.0;
            for (std::size_t n = 0; n < c.alpha.size(); ++n) sum += c.alpha[n] - c.beta[n];
            CHECK(std::abs(c.shift - sum) <= 1e-12);
            const double direct =
                0.5 * (1.0 - std::tan(kPi / (2.0 * m)) * coefficient_g(m, d / 2, d));
            CHECK(std::abs(c.shift - direct) <= 1e-12);
        }
    }
}

TEST_CASE("consistency audit passes on a wide grid") {
    for (int m = 2; m <= 5; ++m) {
        for (int d = 2; d <= 8; ++d) {
            const ConsistencyReport r = verify_consistency(make_coefficients(Scenario(2, m, d)));
            CHECK(r.ok);
            CHECK(r.max_residual <= 1e-12);
        }
    }
}

TEST_CASE("consistency audit detects perturbations") {
    CoefficientSet c = make_coefficients(Scenario(2, 2, 3));
    c.alpha[0] += 1e-6;
    c.alpha_hat[0] += 1e-6;
    const ConsistencyReport r = verify_consistency(c);
    CHECK(!r.ok);
    CHECK(r.max_residual >= 1e-7);
}

TEST_CASE("dominance of the leading coefficient") {
    for (int m : {2, 3}) {
        for (int d : {2, 3, 4, 5}) {
            const CoefficientSet c = make_coefficients(Scenario(2, m, d));
            for (double v : c.alpha_hat) CHECK(c.alpha[0] >= v - 1e-15);
        }
    }
}

}  // TEST_SUITE
