#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bellkit/coefficients.hpp"
#include "bellkit/scenario.hpp"

namespace bellkit {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// ω^e with fractional exponent e: exp(2πi·e/d).
cplx unit_phase(double e, int d);

/// d-dimensional discrete Fourier matrix F_{jk} = ω^{jk}/√d.
Matrix fourier_matrix(int d);

/// Clock matrix Ω = diag(1, ω, …, ω^{d−1}).
Matrix clock_matrix(int d);

/// Per-party measurement phase (setting x is 1-based):
/// party 1 → (x−1/2)/m, party 2 → x/m, parties ≥3 → (x−1)/m.
double observable_phase(int party, int m, int x);

/// The optimal d-outcome observable of party `party` for setting x: a unitary
/// with spectrum {1, ω, …, ω^{d−1}} built by conjugating the clock matrix.
/// Party 1: U F Ω F† U† with U = diag(ω^{−j·phase}); party 2: V F† Ω F V†
/// with V = diag(ω^{+j·phase}); parties ≥3 alternate those two shapes
/// (odd party index like party 1, even like party 2) with W = diag(ω^{−j·phase}).
Matrix optimal_observable(const Scenario& s, int party, int x);

/// One d×d observable per (party, setting): observables[i−1][x−1].
struct ObservableSet {
    Scenario scenario;
    std::vector<std::vector<Matrix>> observables;
};

ObservableSet optimal_observables(const Scenario& s);

/// A^(e mod d) by repeated multiplication (numerically exact for the sizes
/// used here; negative e wraps to d−|e| mod d).
Matrix matrix_power_cyclic(const Matrix& a, long long e, int d);

/// Applies a d×d operator to party `party` (1-based) of a d^N state vector.
Vector apply_local(const Matrix& op, const Vector& psi, int party, int n_parties, int d);

/// (1/√d)·Σ_j |j⟩^{⊗N}.
Vector ghz_state(int n_parties, int d);

/// Weighted diagonal superposition Σ_j w_j|j⟩^{⊗N}, normalized.
Vector ghz_weighted_state(int n_parties, const std::vector<double>& weights);

/// (|0…0⟩ + γ|1…1⟩ + |2…2⟩)/√(2+γ²), qutrits. Rejects γ < 0.
Vector ghz_tilted_state(int n_parties, double gamma);

/// Born-rule behavior of |ψ⟩ under projective measurements derived from the
/// given unitary observables. Each observable must be unitary (1e−10) with
/// every eigenvalue within 1e−8 of a d-th root of unity; outcome a corresponds
/// to eigenvalue ω^a. Throws std::invalid_argument on violations.
Behavior born_behavior(const Vector& psi, const ObservableSet& obs);

/// Born-rule behavior of the GHZ state under the optimal observables.
Behavior ghz_behavior(const Scenario& s);

/// Closed-form probabilities of a weighted diagonal state under the optimal
/// observables: p(a|x) = d^{−N}·|Σ_j c_j ω^{−j(D(a)−Φ(x))}|² with
/// D(a) = Σ_i (−1)^{i+1} a_i and Φ(x) the alternating sum of the phases.
Behavior ghz_closed_form_behavior(const Scenario& s, const std::vector<double>& weights);

/// One correlator term of the expression, factored per party: for an α-tuple
/// and k, party 1 carries a_k·A^k_{1,α₁} + a_k*·ω^{k·wrap}·A^k_{1,α₁+1} and
/// party i ≥ 2 carries ω^{±k·wrap}·A^{(−1)^{i−1}k} of the combined setting.
struct CorrelatorTerm {
    std::vector<int> alpha;         ///< α₁..α_{N−1}
    int k;                          ///< 1..d−1
    std::vector<Matrix> party_ops;  ///< one d×d factor per party
};

/// All m^{N−1}(d−1) correlator terms, α-tuple-major, k fastest.
std::vector<CorrelatorTerm> correlator_terms(const ObservableSet& obs,
                                             const std::vector<cplx>& a_coeffs);

/// Max over all terms of ‖(term)|ψ⟩ − |ψ⟩‖ — zero (to numerical precision)
/// exactly when every correlator term stabilizes the state.
double stabilizer_deviation(const Vector& psi, const ObservableSet& obs,
                            const std::vector<cplx>& a_coeffs);

/// Stabilizer deviation of the GHZ state under the optimal observables.
double verify_stabilizer(const Scenario& s);

/// Max over n of the spread of {P(X_α = n), P(X̄_α = n)} across all branch
/// contexts α at fixed n.
double uniformity_spread(const Behavior& b);

}  // namespace bellkit
