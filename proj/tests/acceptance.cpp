// Acceptance suite: one self-contained check per numbered criterion, each
// printing exactly one "criterion N: PASS/FAIL — detail" line. The binary
// exits nonzero if any executed criterion fails. Run all criteria with no
// arguments or a single one with --criterion N.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "bellkit/bounds.hpp"
#include "bellkit/coefficients.hpp"
#include "bellkit/expression.hpp"
#include "bellkit/quantum.hpp"
#include "bellkit/scenario.hpp"
#include "bellkit/sos.hpp"
#include "bellkit/tilted.hpp"

using namespace bellkit;

namespace {

struct CriterionResult {
    bool pass;
    std::string detail;
};

std::string num(double v, int digits = 17) {
    std::ostringstream out;
    out << std::setprecision(digits) << v;
    return out.str();
}

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct ReferenceCell {
    int n, m, d;
    double reference;
};

// Four-digit reference values for the enumerated classical bounds.
const std::vector<ReferenceCell> kClassicalReferences = {
    {3, 2, 2, 4.2426}, {3, 2, 3, 3.0416},  {3, 2, 4, 3.5953},  {3, 3, 2, 7.5056},
    {3, 3, 3, 6.1760}, {3, 3, 4, 6.9765},  {4, 2, 2, 7.0711},  {4, 2, 3, 4.7169},
    {4, 2, 4, 5.8301}, {4, 3, 2, 20.2073}, {4, 3, 3, 16.2537},
};

// Four-digit reference values for the hybrid (genuine-multipartite) bounds.
const std::vector<ReferenceCell> kHybridReferences = {
    {3, 2, 2, 4.2426}, {3, 2, 3, 3.0416}, {3, 2, 4, 3.5953},
    {3, 3, 2, 8.6603}, {3, 3, 3, 7.3132}, {3, 3, 4, 8.1115},
};

// ---------------------------------------------------------------------------
// 1. Enumerated classical bounds vs the tabulated reference decimals (1e-4),
//    all eleven three- and four-party cells, within a five-minute budget.
CriterionResult criterion_1() {
    constexpr double kTol = 1e-4;
    constexpr double kBudgetSeconds = 300.0;
    const auto start = std::chrono::steady_clock::now();
    int passed = 0;
    std::string failures;
    double value_323 = 0.0;
    for (const ReferenceCell& cell : kClassicalReferences) {
        const Scenario s(cell.n, cell.m, cell.d);
        const double value = classical_bound_bruteforce(s, make_coefficients(s)).value;
        if (cell.n == 3 && cell.m == 2 && cell.d == 3) value_323 = value;
        const double delta = std::abs(value - cell.reference);
        if (delta <= kTol) {
            ++passed;
        } else {
            failures += " (" + std::to_string(cell.n) + "," + std::to_string(cell.m) + "," +
                        std::to_string(cell.d) + "): computed " + num(value) + " vs reference " +
                        num(cell.reference, 6) + ", delta " + num(delta, 3) + ";";
        }
    }
    // Supplementary cross-check on the one cell whose reference decimal the
    // enumeration contradicts: the three-party two-setting three-outcome bound
    // must equal twice the two-party closed form (the hybrid bound caps it
    // there and the all-zero product strategy attains it), pinning the
    // computed value independently of the reference table.
    const double supp_delta = std::abs(value_323 - 2.0 * classical_bound_bipartite(2, 3));
    const double elapsed = seconds_since(start);
    std::string detail = std::to_string(passed) + "/" +
                         std::to_string(kClassicalReferences.size()) +
                         " cells within 1e-04 in " + num(elapsed, 3) + "s";
    if (!failures.empty())
        detail += " — failing:" + failures + " (3,2,3) enumeration equals twice the two-party " +
                  "closed form to " + num(supp_delta, 3) + ", so the reference decimal is the " +
                  "outlier";
    if (supp_delta > 1e-10) detail += " — supplementary closed-form cross-check failed";
    if (elapsed > kBudgetSeconds) detail += " — exceeded " + num(kBudgetSeconds, 3) + "s budget";
    return {failures.empty() && supp_delta <= 1e-10 && elapsed <= kBudgetSeconds, detail};
}

// ---------------------------------------------------------------------------
// 2. Two-party enumeration agrees with the closed-form classical bound to
//    1e-10 for m in {2,3}, d in {2,3,4,5}.
CriterionResult criterion_2() {
    constexpr double kTol = 1e-10;
    double worst = 0.0;
    std::string worst_at;
    for (int m : {2, 3}) {
        for (int d : {2, 3, 4, 5}) {
            const Scenario s(2, m, d);
            const double brute = classical_bound_bruteforce(s, make_coefficients(s)).value;
            const double delta = std::abs(brute - classical_bound_bipartite(m, d));
            if (delta > worst) {
                worst = delta;
                worst_at = "(m=" + std::to_string(m) + ",d=" + std::to_string(d) + ")";
            }
        }
    }
    return {worst <= kTol,
            "max |enumerated - closed form| = " + num(worst, 3) + " at " + worst_at +
                " (tolerance 1e-10)"};
}

// ---------------------------------------------------------------------------
// 3. Hybrid bound: bipartition enumeration equals m^{N-2} times the two-party
//    closed form to 1e-8, and the enumerated values match the tabulated
//    reference decimals to 1e-4.
CriterionResult criterion_3() {
    constexpr double kScaleTol = 1e-8;
    constexpr double kRefTol = 1e-4;
    double worst_scale = 0.0;
    std::string failures;
    for (auto [m, d] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{2, 4}, std::pair{3, 2},
                        std::pair{3, 3}}) {
        const Scenario s(3, m, d);
        const double enumerated =
            svetlichny_bound(s, make_coefficients(s), SvetlichnyMode::enumeration).value;
        worst_scale = std::max(
            worst_scale, std::abs(enumerated - m * classical_bound_bipartite(m, d)));
    }
    for (const ReferenceCell& cell : kHybridReferences) {
        const Scenario s(cell.n, cell.m, cell.d);
        const double enumerated =
            svetlichny_bound(s, make_coefficients(s), SvetlichnyMode::enumeration).value;
        const double delta = std::abs(enumerated - cell.reference);
        if (delta > kRefTol)
            failures += " (" + std::to_string(cell.n) + "," + std::to_string(cell.m) + "," +
                        std::to_string(cell.d) + "): computed " + num(enumerated) +
                        " vs reference " + num(cell.reference, 6) + ", delta " + num(delta, 3) +
                        ";";
    }
    std::string detail = "max |enumerated - scaled closed form| = " + num(worst_scale, 3) +
                         " (tolerance 1e-08); references within 1e-04: " +
                         (failures.empty() ? std::string("all 6 cells")
                                           : "failing:" + failures);
    return {worst_scale <= kScaleTol && failures.empty(), detail};
}

// ---------------------------------------------------------------------------
// 4. The tailored state and observables reach the correlator-picture value
//    m^{N-1}(d-1)/d through the Born rule (1e-10), and every correlator term
//    stabilizes the state (1e-10), for N in {2,3,4}, m in {2,3}, d in
//    {2,3,4,5}.
CriterionResult criterion_4() {
    constexpr double kTol = 1e-10;
    double worst_value = 0.0, worst_stab = 0.0;
    for (int n : {2, 3, 4}) {
        for (int m : {2, 3}) {
            for (int d : {2, 3, 4, 5}) {
                const Scenario s(n, m, d);
                const CoefficientSet c = make_coefficients(s);
                const double value =
                    evaluate_correlator_form(to_correlators(ghz_behavior(s)), c);
                worst_value = std::max(worst_value,
                                       std::abs(value - quantum_bound_correlator(s)));
                worst_stab = std::max(worst_stab, verify_stabilizer(s));
            }
        }
    }
    return {worst_value <= kTol && worst_stab <= kTol,
            "max |Born value - m^{N-1}(d-1)/d| = " + num(worst_value, 3) +
                ", max stabilizer deviation = " + num(worst_stab, 3) + " (tolerance 1e-10)"};
}

// ---------------------------------------------------------------------------
// 5. Sum-of-squares decomposition: the identity residual stays below 1e-8 and
//    the smallest eigenvalue of (bound - operator) above -1e-9, at the
//    tailored observables and at 50 random admissible observable sets per
//    grid point, N in {2,3}, m in {2,3,4}, d in {2,3,4}; ten-minute budget.
CriterionResult criterion_5() {
    constexpr double kResidualTol = 1e-8;
    constexpr double kEigFloor = -1e-9;
    constexpr int kTrials = 50;
    constexpr double kBudgetSeconds = 600.0;
    const auto start = std::chrono::steady_clock::now();
    double worst_residual = 0.0, worst_eig = 0.0;
    std::uint64_t point = 0;
    for (int n : {2, 3}) {
        for (int m : {2, 3, 4}) {
            for (int d : {2, 3, 4}) {
                const Scenario s(n, m, d);
                const CoefficientSet c = make_coefficients(s);
                const SosReport at_optimal = sos_residual(optimal_observables(s), c);
                worst_residual = std::max(worst_residual, at_optimal.residual_max);
                worst_eig = std::min(worst_eig, at_optimal.min_eigenvalue);
                for (int trial = 0; trial < kTrials; ++trial) {
                    const ObservableSet obs =
                        random_observables(s, 1000003ULL * point + trial + 1);
                    const SosReport r = sos_residual(obs, c);
                    worst_residual = std::max(worst_residual, r.residual_max);
                    worst_eig = std::min(worst_eig, r.min_eigenvalue);
                }
                ++point;
            }
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass =
        worst_residual <= kResidualTol && worst_eig >= kEigFloor && elapsed <= kBudgetSeconds;
    return {pass, "max residual = " + num(worst_residual, 3) +
                      " (tolerance 1e-08), min eigenvalue = " + num(worst_eig, 3) +
                      " (floor -1e-09), " + std::to_string(18 * (kTrials + 1)) +
                      " decompositions in " + num(elapsed, 3) + "s"};
}

// ---------------------------------------------------------------------------
// 6. The no-signaling maximizer: the constructed behavior is a valid
//    nonsignaling behavior (marginal discrepancy <= 1e-9) and evaluates to
//    2 m^{N-1} alpha_0 within 1e-12, for N in {2,3,4}, m in {2,3}, d in
//    {2,3,4}.
CriterionResult criterion_6() {
    constexpr double kMarginalTol = 1e-9;
    constexpr double kValueTol = 1e-12;
    double worst_marginal = 0.0, worst_value = 0.0;
    for (int n : {2, 3, 4}) {
        for (int m : {2, 3}) {
            for (int d : {2, 3, 4}) {
                const Scenario s(n, m, d);
                const CoefficientSet c = make_coefficients(s);
                const auto [bound, behavior] = ns_bound_and_behavior(s, c);
                behavior.validate();
                worst_marginal =
                    std::max(worst_marginal, check_no_signaling(behavior).max_discrepancy);
                const double target = 2.0 * ipow(m, n - 1) * c.alpha[0];
                worst_value = std::max(worst_value, std::abs(bound - target));
                worst_value =
                    std::max(worst_value, std::abs(evaluate_probability_form(behavior, c) -
                                                   target));
            }
        }
    }
    return {worst_marginal <= kMarginalTol && worst_value <= kValueTol,
            "max marginal discrepancy = " + num(worst_marginal, 3) +
                " (tolerance 1e-09), max |value - 2 m^{N-1} alpha_0| = " +
                num(worst_value, 3) + " (tolerance 1e-12)"};
}

// ---------------------------------------------------------------------------
// 7. Uniformity: on the tailored realization every context value is uniformly
//    distributed — the spread across contexts and values stays below 1e-10 on
//    the criterion-4 grid.
CriterionResult criterion_7() {
    constexpr double kTol = 1e-10;
    double worst = 0.0;
    for (int n : {2, 3, 4}) {
        for (int m : {2, 3}) {
            for (int d : {2, 3, 4, 5}) {
                const Scenario s(n, m, d);
                worst = std::max(worst, uniformity_spread(ghz_behavior(s)));
            }
        }
    }
    return {worst <= kTol, "max spread = " + num(worst, 3) + " (tolerance 1e-10)"};
}

// ---------------------------------------------------------------------------
// 8. Picture mapping: |I - I_tilde - (2 m^{N-1}/d) S| <= 1e-10 for 100 random
//    behaviors per scenario on the criterion-6 grid.
CriterionResult criterion_8() {
    constexpr double kTol = 1e-10;
    constexpr int kBehaviors = 100;
    double worst = 0.0;
    std::uint64_t point = 0;
    for (int n : {2, 3, 4}) {
        for (int m : {2, 3}) {
            for (int d : {2, 3, 4}) {
                const Scenario s(n, m, d);
                const CoefficientSet c = make_coefficients(s);
                const double shift_term = 2.0 * ipow(m, n - 1) * c.shift / d;
                std::mt19937_64 rng(47 + 1000 * point++);
                std::uniform_real_distribution<double> uniform(0.0, 1.0);
                for (int rep = 0; rep < kBehaviors; ++rep) {
                    Behavior b(s);
                    for (std::int64_t x = 0; x < s.setting_tuples(); ++x) {
                        double total = 0.0;
                        for (std::int64_t a = 0; a < s.outcome_tuples(); ++a) {
                            b.at(x, a) = uniform(rng);
                            total += b.at(x, a);
                        }
                        for (std::int64_t a = 0; a < s.outcome_tuples(); ++a)
                            b.at(x, a) /= total;
                    }
                    const double prob = evaluate_probability_form(b, c);
                    const double corr = evaluate_correlator_form(to_correlators(b), c);
                    worst = std::max(worst, std::abs(prob - corr - shift_term));
                }
            }
        }
    }
    return {worst <= kTol, "max |I - I_tilde - shift| = " + num(worst, 3) +
                               " across 1800 random behaviors (tolerance 1e-10)"};
}

// ---------------------------------------------------------------------------
// 9. Single-parameter family: the piecewise classical bounds equal the
//    enumerated bounds at eight tilts for N in {2,3,4}; the stationary tilt
//    at xi = 1 equals (sqrt(11)-sqrt(3))/2 to 1e-12; and over a 50-point grid
//    of tilts in (-0.99, 5] the Born-rule value at the stationary tilt equals
//    the closed-form family maximum (doubled per added party) to 1e-10.
CriterionResult criterion_9() {
    constexpr double kEnumTol = 1e-12;
    constexpr double kGammaTol = 1e-12;
    constexpr double kQuantumTol = 1e-10;
    double worst_enum = 0.0;
    for (int n : {2, 3, 4})
        for (double xi : {-2.0, -1.0, -0.5, 0.0, 0.4, 1.0, 2.0, 5.0})
            worst_enum = std::max(worst_enum,
                                  std::abs(tilted_classical_bound(n, xi) -
                                           tilted_classical_bound_bruteforce(n, xi).value));
    const double gamma_delta =
        std::abs(optimal_gamma(1.0) - (std::sqrt(11.0) - std::sqrt(3.0)) / 2.0);
    double worst_quantum = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double xi = -0.99 + (i + 1) * (5.99 / 50.0);
        const double gamma = optimal_gamma(xi);
        for (int n : {2, 3, 4})
            worst_quantum = std::max(worst_quantum,
                                     std::abs(tilted_quantum_value(n, xi, gamma) -
                                              conjectured_max(n, xi)));
    }
    const bool pass =
        worst_enum <= kEnumTol && gamma_delta <= kGammaTol && worst_quantum <= kQuantumTol;
    return {pass, "max |piecewise - enumerated| = " + num(worst_enum, 3) +
                      " (tolerance 1e-12), stationary-tilt delta = " + num(gamma_delta, 3) +
                      " (tolerance 1e-12), max |realized - closed form| = " +
                      num(worst_quantum, 3) + " over 150 grid evaluations (tolerance 1e-10)"};
}

// ---------------------------------------------------------------------------
// 10. Reproducibility at scale: the 16.7-million-strategy enumeration for
//     four parties, three settings, four outcomes finishes within fifteen
//     minutes, returns bit-identical value and witness across two runs, and
//     matches the derived constant 18.659391182794149 (no independent
//     reference decimal exists for this cell) to 1e-12.
CriterionResult criterion_10() {
    constexpr double kDerived = 18.659391182794149;
    constexpr double kTol = 1e-12;
    constexpr double kBudgetSeconds = 900.0;
    const auto start = std::chrono::steady_clock::now();
    const Scenario s(4, 3, 4);
    const CoefficientSet c = make_coefficients(s);
    const BoundReport first = classical_bound_bruteforce(s, c);
    const BoundReport second = classical_bound_bruteforce(s, c);
    const double elapsed = seconds_since(start);
    const bool identical = first.value == second.value && first.strategy.has_value() &&
                           second.strategy.has_value() &&
                           first.strategy->id() == second.strategy->id();
    const double delta = std::abs(first.value - kDerived);
    const bool pass = identical && delta <= kTol && elapsed <= kBudgetSeconds;
    std::string detail = std::string("runs ") + (identical ? "bit-identical" : "DIFFER") +
                         ", |value - derived| = " + num(delta, 3) +
                         " (tolerance 1e-12), both runs in " + num(elapsed, 3) + "s";
    if (elapsed > kBudgetSeconds) detail += " — exceeded budget";
    return {pass, detail};
}

using CriterionFn = CriterionResult (*)();
const CriterionFn kCriteria[] = {criterion_1, criterion_2, criterion_3, criterion_4,
                                 criterion_5, criterion_6, criterion_7, criterion_8,
                                 criterion_9, criterion_10};

}  // namespace

int main(int argc, char** argv) {
    int selected = 0;  // 0 = all
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        std::string value;
        if (arg == "--criterion" && i + 1 < argc) {
            value = argv[++i];
        } else if (arg.rfind("--criterion=", 0) == 0) {
            value = arg.substr(std::strlen("--criterion="));
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]  (N in 1..10; default: all)\n",
                         argv[0]);
            return 2;
        }
        char* end = nullptr;
        const long parsed = std::strtol(value.c_str(), &end, 10);
        if (end == value.c_str() || *end != '\0' || parsed < 1 || parsed > 10) {
            std::fprintf(stderr, "invalid criterion '%s' (expected 1..10)\n", value.c_str());
            return 2;
        }
        selected = static_cast<int>(parsed);
    }
    bool all_pass = true;
    for (int k = 1; k <= 10; ++k) {
        if (selected != 0 && k != selected) continue;
        CriterionResult result;
        try {
            result = kCriteria[k - 1]();
        } catch (const std::exception& e) {
            result = {false, std::string("unexpected exception: ") + e.what()};
        }
        std::printf("criterion %d: %s — %s\n", k, result.pass ? "PASS" : "FAIL",
                    result.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && result.pass;
    }
    return all_pass ? 0 : 1;
}
