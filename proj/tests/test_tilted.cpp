#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bellkit/coefficients.hpp"
#include "bellkit/errors.hpp"
#include "bellkit/expression.hpp"
#include "bellkit/tilted.hpp"

using namespace bellkit;

TEST_SUITE("tilted") {

TEST_CASE("scenario and residue weights") {
    CHECK(tilted_scenario(3) == Scenario(3, 2, 3));
    const std::vector<double> w = tilted_residue_weights(2.0);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == 0.0);
    CHECK(w[2] == -2.0);
}

TEST_CASE("piecewise classical bound matches enumeration") {
    for (int n : {2, 3, 4}) {
        for (double xi : {-2.0, -1.0, -0.5, 0.0, 0.4, 1.0, 2.0, 5.0}) {
            CAPTURE(n);
            CAPTURE(xi);
            const double closed = tilted_classical_bound(n, xi);
            const double brute = tilted_classical_bound_bruteforce(n, xi).value;
            CHECK(std::abs(closed - brute) <= 1e-12);
        }
    }
    CHECK(tilted_classical_bound(2, 0.0) == 3.0);
    CHECK(tilted_classical_bound(4, 1.0) == 8.0);
    CHECK(tilted_classical_bound(3, -2.0) == 16.0);
    CHECK_THROWS_AS(tilted_classical_bound(5, 0.0), std::invalid_argument);
}

TEST_CASE("four-party breakpoints are continuous") {
    CHECK(tilted_classical_bound(4, -10.0 / 11.0) ==
          doctest::Approx(160.0 / 11.0).epsilon(1e-14));
    CHECK(std::abs(-16.0 * (-10.0 / 11.0) - (10.0 - 5.0 * (-10.0 / 11.0))) <= 1e-12);
    CHECK(tilted_classical_bound(4, 0.4) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("stationary tilt") {
    const double xi0 = (std::sqrt(3.0) - 1.0) / 2.0;
    CHECK(optimal_gamma(1.0) ==
          doctest::Approx((std::sqrt(11.0) - std::sqrt(3.0)) / 2.0).epsilon(1e-12));
    CHECK(optimal_gamma(xi0) == doctest::Approx(1.0).epsilon(1e-12));

    SUBCASE("the closed form is stationary there") {
        const double h = 1e-5;
        for (double xi : {0.0, 1.0, 2.0}) {
            const double g = optimal_gamma(xi);
            const double slope = (tilted_quantum_closed_form(xi, g + h) -
                                  tilted_quantum_closed_form(xi, g - h)) /
                                 (2.0 * h);
            CHECK(std::abs(slope) <= 1e-6);
        }
    }
    SUBCASE("the trivial regime is rejected") {
        CHECK_THROWS_WITH_AS(optimal_gamma(-1.5), doctest::Contains("trivial regime"),
                             std::invalid_argument);
        CHECK_THROWS_AS(optimal_gamma(-1.0), std::invalid_argument);
        CHECK_THROWS_AS(conjectured_max(2, -2.0), std::invalid_argument);
    }
}

TEST_CASE("realized quantum value") {
    CHECK(tilted_quantum_closed_form(1.0, 1.0) ==
          doctest::Approx(2.8729340511723356).epsilon(1e-14));
    CHECK(tilted_quantum_value(2, 1.0, 1.0) ==
          doctest::Approx(2.8729340511723356).epsilon(1e-10));

    SUBCASE("the realized maximum matches its closed form") {
        const double xi0 = (std::sqrt(3.0) - 1.0) / 2.0;
        CHECK(conjectured_max(2, 1.0) ==
              doctest::Approx((3.0 + std::sqrt(33.0)) / 3.0).epsilon(1e-14));
        CHECK(conjectured_max(2, xi0) ==
              doctest::Approx(2.0 + 2.0 / std::sqrt(3.0)).epsilon(1e-14));
        for (double xi : {-0.5, 0.0, 1.0, 3.0}) {
            CHECK(tilted_quantum_value(2, xi, optimal_gamma(xi)) ==
                  doctest::Approx(conjectured_max(2, xi)).epsilon(1e-10));
        }
    }
    SUBCASE("each added party doubles the value") {
        const double base = tilted_quantum_value(2, 0.5, 0.9);
        CHECK(std::abs(tilted_quantum_value(3, 0.5, 0.9) - 2.0 * base) <= 1e-10);
        CHECK(std::abs(tilted_quantum_value(4, 0.5, 0.9) - 4.0 * base) <= 1e-10);
        CHECK(conjectured_max(4, 0.7) ==
              doctest::Approx(2.0 * conjectured_max(3, 0.7)).epsilon(1e-14));
    }
    SUBCASE("grid search finds no higher value than the stationary tilt") {
        for (double xi : {0.0, 1.0}) {
            const double grid = tilted_grid_max(2, xi);
            CHECK(grid <= conjectured_max(2, xi) + 1e-8);
            CHECK(grid >= conjectured_max(2, xi) - 1e-6);
        }
    }
}

TEST_CASE("the untilted member reproduces the two-setting qutrit functional") {
    const double xi0 = (std::sqrt(3.0) - 1.0) / 2.0;
    for (int n : {2, 3}) {
        const CoefficientSet c = make_coefficients(Scenario(n, 2, 3));
        const BellFunctional full = functional_table(c);
        const BellFunctional family = tilted_functional(n, xi0);
        REQUIRE(full.table.size() == family.table.size());
        for (std::size_t i = 0; i < full.table.size(); ++i)
            CHECK(std::abs(full.table[i] - c.alpha[0] * family.table[i]) <= 1e-12);
    }
}

TEST_CASE("scan") {
    const std::vector<TiltedScanRow> rows = tilted_scan(2, 0.0, 1.0, 0.5);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const TiltedScanRow& r = rows[i];
        CHECK(r.xi == doctest::Approx(0.5 * static_cast<double>(i)).epsilon(1e-14));
        CHECK(r.gamma_opt == doctest::Approx(optimal_gamma(r.xi)).epsilon(1e-12));
        CHECK(r.classical_bound ==
              doctest::Approx(tilted_classical_bound(2, r.xi)).epsilon(1e-12));
        CHECK(r.conjectured_max == doctest::Approx(conjectured_max(2, r.xi)).epsilon(1e-12));
        CHECK(r.realized_quantum ==
              doctest::Approx(tilted_quantum_value(2, r.xi, r.gamma_opt)).epsilon(1e-10));
        CHECK(r.ratio == doctest::Approx(r.realized_quantum / r.classical_bound).epsilon(1e-12));
        CHECK(r.ratio > 1.0);  // quantum advantage throughout [0, 1]
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_WITH_AS(tilted_scan(2, 0.0, 1.0, 0.0), doctest::Contains("step"),
                             std::invalid_argument);
        CHECK_THROWS_WITH_AS(tilted_scan(2, 1.0, 0.0, 0.5), doctest::Contains("xi_max"),
                             std::invalid_argument);
    }
}

}  // TEST_SUITE
