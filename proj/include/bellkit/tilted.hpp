#pragma once

#include <vector>

#include "bellkit/bounds.hpp"
#include "bellkit/expression.hpp"
#include "bellkit/scenario.hpp"

namespace bellkit {

/// The (N, m=2, d=3) scenario the single-parameter family lives in.
Scenario tilted_scenario(int n_parties);

/// Residue weights of the family at ξ: weight 1 on residue 0 and −ξ on
/// residue 2, i.e. the probability of the branch combinations hitting 0 minus
/// ξ times the probability of them hitting the last residue class.
std::vector<double> tilted_residue_weights(double xi);

/// The family as a dense coefficient table.
BellFunctional tilted_functional(int n_parties, double xi);

/// Piecewise closed-form classical bound, supported for N ∈ {2,3,4}:
/// N=2: −4ξ | 3−ξ | 2 with breaks at ξ = −1, 1;
/// N=3: −8ξ | 2(3−ξ) | 4 with the same breaks;
/// N=4: −16ξ | 10−5ξ | 8 with breaks at ξ = −10/11, 2/5.
double tilted_classical_bound(int n_parties, double xi);

/// Exact classical bound by enumerating all 3^{2N} deterministic strategies.
BoundReport tilted_classical_bound_bruteforce(int n_parties, double xi);

/// N=2 closed form (4/3)·(3 + γ(2√3 + γ − ξγ))/(2 + γ²).
double tilted_quantum_closed_form(double xi, double gamma);

/// Value of the family on the tilted diagonal state (1, γ, 1)/√(2+γ²) under
/// the optimal observables, computed through the Born rule. For N = 2 the
/// result is cross-checked against the closed form within 1e−10
/// (consistency_error on disagreement).
double tilted_quantum_value(int n_parties, double xi, double gamma);

/// The stationary tilt γ₊(ξ) = [√(4ξ²+4ξ+25) − 2ξ − 1]/(2√3). Requires
/// ξ > −1; at or below that the inequality makes no quantum-advantage claim
/// ("trivial regime" error).
double optimal_gamma(double xi);

/// Realized maximum over the tilted-state family: N=2 closed form
/// (5 − 2ξ + √(25 + 4ξ(ξ+1)))/3, doubled per additional party (N=3 twice,
/// N=4 four times). Labeled conjectured as the global quantum maximum.
double conjectured_max(int n_parties, double xi);

/// Grid maximization of tilted_quantum_value over γ ∈ [0, 5]: coarse step,
/// then ternary refinement around the best cell.
double tilted_grid_max(int n_parties, double xi);

struct TiltedScanRow {
    double xi;
    double gamma_opt;
    double classical_bound;
    double realized_quantum;    ///< value at γ₊(ξ) through the Born rule
    double conjectured_max;     ///< closed-form family maximum (conjectured global)
    double ratio;               ///< realized_quantum / classical_bound
};

/// One row per ξ from xi_min to xi_max (inclusive within half a step) in
/// increments of `step`; rows are computed independently in parallel.
std::vector<TiltedScanRow> tilted_scan(int n_parties, double xi_min, double xi_max, double step);

}  // namespace bellkit
