#include "bellkit/coefficients.hpp"

#include <cmath>
#include <numbers>

#include "bellkit/tolerances.hpp"

namespace bellkit {

double coefficient_g(int m, double x, int d) {
    return 1.0 / std::tan(std::numbers::pi * (x + 1.0 / (2.0 * m)) / d);
}

CoefficientSet make_coefficients(const Scenario& s) {
    const int m = s.n_settings, d = s.n_outcomes;
    const int h = d / 2;
    const double t = std::tan(std::numbers::pi / (2.0 * m));
    const double gh = coefficient_g(m, h, d);

    CoefficientSet c{s, {}, {}, {}, {}, 0.0};
    c.alpha.resize(static_cast<std::size_t>(h));
    c.beta.resize(static_cast<std::size_t>(h));
    for (int n = 0; n < h; ++n) {
        c.alpha[static_cast<std::size_t>(n)] = t / (2.0 * d) * (coefficient_g(m, n, d) - gh);
        c.beta[static_cast<std::size_t>(n)] =
            t / (2.0 * d) * (coefficient_g(m, n + 1.0 - 1.0 / m, d) + gh);
    }

    c.alpha_hat.assign(static_cast<std::size_t>(d), 0.0);
    for (int n = 0; n < h; ++n) c.alpha_hat[static_cast<std::size_t>(n)] = c.alpha[static_cast<std::size_t>(n)];
    // middle entry (n = h for odd d) stays 0; upper entries fold the β block
    for (int n = d - 1; n >= h + (d % 2); --n)
        c.alpha_hat[static_cast<std::size_t>(n)] = -c.beta[static_cast<std::size_t>(d - 1 - n)];

    c.a.resize(static_cast<std::size_t>(d - 1));
    const double norm = 1.0 / (2.0 * std::cos(std::numbers::pi / (2.0 * m)));
    for (int k = 1; k < d; ++k) {
        const double ph = std::numbers::pi * (2.0 * k - d) / (2.0 * m * d);
        c.a[static_cast<std::size_t>(k - 1)] = norm * cplx{std::cos(ph), std::sin(ph)};
    }

    c.shift = 0.5 * (1.0 - t * gh);
    return c;
}

ConsistencyReport verify_consistency(const CoefficientSet& c) {
    const int m = c.scenario.n_settings, d = c.scenario.n_outcomes;
    (void)m;
    const int h = d / 2;
    ConsistencyReport r;
    for (int k = 1; k <= h; ++k) {
        cplx lhs{0.0, 0.0};
        for (int n = 0; n < h; ++n) {
            const double pa = -2.0 * std::numbers::pi * k * n / d;
            const double pb = 2.0 * std::numbers::pi * k * (n + 1.0) / d;
            lhs += c.alpha[static_cast<std::size_t>(n)] * cplx{std::cos(pa), std::sin(pa)};
            lhs -= c.beta[static_cast<std::size_t>(n)] * cplx{std::cos(pb), std::sin(pb)};
        }
        const double res = std::abs(lhs - c.a[static_cast<std::size_t>(k - 1)]);
        if (res > r.max_residual) {
            r.max_residual = res;
            r.worst_k = k;
        }
    }
    bool dominant = true;
    for (double an : c.alpha_hat)
        if (c.alpha_hat[0] < an - tolerances().exact) dominant = false;
    r.ok = dominant && r.max_residual <= tolerances().exact;
    return r;
}

}  // namespace bellkit
