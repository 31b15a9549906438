#include "bellkit/tilted.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bellkit/errors.hpp"
#include "bellkit/quantum.hpp"
#include "bellkit/tolerances.hpp"

namespace bellkit {

Scenario tilted_scenario(int n_parties) {
    return Scenario(n_parties, 2, 3);
}

std::vector<double> tilted_residue_weights(double xi) {
    return {1.0, 0.0, -xi};
}

BellFunctional tilted_functional(int n_parties, double xi) {
    return functional_table_from_residues(tilted_scenario(n_parties), tilted_residue_weights(xi));
}

double tilted_classical_bound(int n_parties, double xi) {
    switch (n_parties) {
        case 2:
            if (xi <= -1.0) return -4.0 * xi;
            if (xi <= 1.0) return 3.0 - xi;
            return 2.0;
        case 3:
            if (xi <= -1.0) return -8.0 * xi;
            if (xi <= 1.0) return 2.0 * (3.0 - xi);
            return 4.0;
        case 4:
            if (xi <= -10.0 / 11.0) return -16.0 * xi;
            if (xi <= 0.4) return 10.0 - 5.0 * xi;
            return 8.0;
        default:
            throw std::invalid_argument(
                "tilted_classical_bound: closed forms cover 2, 3, or 4 parties, got " +
                std::to_string(n_parties));
    }
}

BoundReport tilted_classical_bound_bruteforce(int n_parties, double xi) {
    return classical_bound_bruteforce(tilted_scenario(n_parties), tilted_residue_weights(xi));
}

double tilted_quantum_closed_form(double xi, double gamma) {
    return (4.0 / 3.0) * (3.0 + gamma * (2.0 * std::sqrt(3.0) + gamma - xi * gamma)) /
           (2.0 + gamma * gamma);
}

double tilted_quantum_value(int n_parties, double xi, double gamma) {
    const Scenario s = tilted_scenario(n_parties);
    const Behavior b = born_behavior(ghz_tilted_state(n_parties, gamma), optimal_observables(s));
    const double value = evaluate_residue_form(b, tilted_residue_weights(xi));
    if (n_parties == 2) {
        const double closed = tilted_quantum_closed_form(xi, gamma);
        if (std::abs(value - closed) > tolerances().linalg)
            throw consistency_error(
                "tilted_quantum_value: Born evaluation " + std::to_string(value) +
                " disagrees with the two-party closed form " + std::to_string(closed));
    }
    return value;
}

namespace {

void require_nontrivial(double xi, const char* where) {
    if (xi <= -1.0)
        throw std::invalid_argument(std::string(where) +
                                    ": trivial regime, the family needs xi > -1 (got " +
                                    std::to_string(xi) + ")");
}

}  // namespace

double optimal_gamma(double xi) {
    require_nontrivial(xi, "optimal_gamma");
    return (std::sqrt(4.0 * xi * xi + 4.0 * xi + 25.0) - 2.0 * xi - 1.0) / (2.0 * std::sqrt(3.0));
}

double conjectured_max(int n_parties, double xi) {
    require_nontrivial(xi, "conjectured_max");
    const double two_party = (5.0 - 2.0 * xi + std::sqrt(25.0 + 4.0 * xi * (xi + 1.0))) / 3.0;
    switch (n_parties) {
        case 2: return two_party;
        case 3: return 2.0 * two_party;
        case 4: return 4.0 * two_party;
        default:
            throw std::invalid_argument(
                "conjectured_max: closed forms cover 2, 3, or 4 parties, got " +
                std::to_string(n_parties));
    }
}

double tilted_grid_max(int n_parties, double xi) {
    constexpr double kLo = 0.0;
    constexpr double kHi = 5.0;
    constexpr int kCoarseSteps = 100;
    auto value = [&](double gamma) { return tilted_quantum_value(n_parties, xi, gamma); };

    double best_gamma = kLo;
    double best = value(kLo);
    for (int i = 1; i <= kCoarseSteps; ++i) {
        const double gamma = kLo + (kHi - kLo) * i / kCoarseSteps;
        const double v = value(gamma);
        if (v > best) {
            best = v;
            best_gamma = gamma;
        }
    }
    // Ternary refinement around the best coarse cell.
    const double cell = (kHi - kLo) / kCoarseSteps;
    double lo = std::max(kLo, best_gamma - cell);
    double hi = std::min(kHi, best_gamma + cell);
    for (int iter = 0; iter < 80; ++iter) {
        const double g1 = lo + (hi - lo) / 3.0;
        const double g2 = hi - (hi - lo) / 3.0;
        if (value(g1) < value(g2))
            lo = g1;
        else
            hi = g2;
    }
    const double refined = value(0.5 * (lo + hi));
    return std::max(best, refined);
}

std::vector<TiltedScanRow> tilted_scan(int n_parties, double xi_min, double xi_max, double step) {
    if (step <= 0.0)
        throw std::invalid_argument("tilted_scan: step must be positive");
    if (xi_max < xi_min)
        throw std::invalid_argument("tilted_scan: xi_max must not be below xi_min");
    require_nontrivial(xi_min, "tilted_scan");

    const int count = static_cast<int>(std::floor((xi_max - xi_min) / step + 0.5)) + 1;
    std::vector<TiltedScanRow> rows(static_cast<std::size_t>(count));
    std::string error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
        try {
            const double xi = xi_min + i * step;
            TiltedScanRow row;
            row.xi = xi;
            row.gamma_opt = optimal_gamma(xi);
            row.classical_bound = tilted_classical_bound(n_parties, xi);
            row.realized_quantum = tilted_quantum_value(n_parties, xi, row.gamma_opt);
            row.conjectured_max = conjectured_max(n_parties, xi);
            row.ratio = row.realized_quantum / row.classical_bound;
            rows[static_cast<std::size_t>(i)] = row;
        } catch (const std::exception& e) {
#pragma omp critical
            if (error.empty()) error = e.what();
        }
    }
    if (!error.empty())
        throw consistency_error("tilted_scan: " + error);
    return rows;
}

}  // namespace bellkit
