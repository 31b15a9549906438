#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bellkit/coefficients.hpp"
#include "bellkit/quantum.hpp"
#include "bellkit/scenario.hpp"

namespace bellkit {

/// Kronecker product (row-major block layout, first factor outermost).
Matrix kron(const Matrix& a, const Matrix& b);

/// The maximal correlator-picture value m^{N−1}(d−1)/d attained by the tailored
/// quantum realization, which the squared terms below certify as an upper bound.
double quantum_bound_correlator(const Scenario& s);

/// The same bound mapped to the probability picture: correlator bound plus
/// (2m^{N−1}/d)·S with S the expression's constant shift.
double quantum_bound_probability(const Scenario& s, const CoefficientSet& c);

/// The Bell operator: (1/d)·Σ over correlator terms of the N-party tensor
/// products. Requires every observable to be unitary within 1e−10; the result
/// is Hermitian because the k and d−k terms are adjoints of each other.
Matrix bell_operator(const ObservableSet& obs, const CoefficientSet& c);

/// The party-1 local operator of one squared cross term: a weighted
/// combination of A^k at settings 2, α+2, and α+3 (the slot past m cycling
/// back to the first setting), with coefficient branches for α ≤ m−3 and
/// α = m−2. Valid for m ≥ 3, α ∈ 1..m−2, k ∈ 1..d−1.
Matrix sos_t_local(const ObservableSet& obs, int alpha, int k);

/// The squared decomposition of (quantum bound)·1 − B:
/// (1/2d)·Σ P†P + (m^{N−2}/2d)·Σ T†T with P = 1 − (correlator term) and the
/// T operators embedded as T ⊗ 1^{⊗(N−1)}.
struct SosTerms {
    std::vector<Matrix> p_terms;  ///< m^{N−1}(d−1) operators on dimension d^N
    std::vector<Matrix> t_terms;  ///< (m−2)(d−1) operators, T ⊗ 1 embedded
    double p_weight;              ///< 1/(2d)
    double t_weight;              ///< m^{N−2}/(2d)
};

SosTerms sos_terms(const ObservableSet& obs, const CoefficientSet& c);

struct SosReport {
    double residual_max;    ///< max-norm of [bound·1 − B] − [weighted squares]
    double min_eigenvalue;  ///< smallest eigenvalue of bound·1 − B
};

/// Assembles both sides of the decomposition identity and reports the largest
/// entrywise deviation together with the smallest eigenvalue of
/// (quantum bound)·1 − B (which the identity forces to be ≥ 0 up to rounding).
SosReport sos_residual(const ObservableSet& obs, const CoefficientSet& c);

/// Random admissible observables: Haar-random eigenbasis (QR of a complex
/// Gaussian matrix with the phase convention fixed) and a spectrum drawn
/// uniformly from the d-th roots of unity with repetition allowed.
ObservableSet random_observables(const Scenario& s, std::mt19937_64& rng);
ObservableSet random_observables(const Scenario& s, std::uint64_t seed);

}  // namespace bellkit
