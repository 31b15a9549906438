#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bellkit/coefficients.hpp"
#include "bellkit/scenario.hpp"

namespace bellkit {

/// One branch context of the expression: for an α-tuple (α₁..α_{N−1}, α_N ≡ 1)
/// the X branch combines party outcomes with signs (+1, −1, +1, …) and the X̄
/// branch uses setting α₁+1 on party 1 with all signs flipped. Settings larger
/// than m wrap around: A_{j,m+γ} = A_{j,γ} + 1, recorded as a wrap flag whose
/// signed sum W enters the residue.
struct AssignmentContext {
    bool bar;                   ///< false: X branch, true: X̄ branch
    std::vector<int> alpha;     ///< α₁..α_{N−1}, each 1..m
    std::vector<int> settings;  ///< reduced setting per party, 1..m
    std::vector<int> signs;     ///< ±1 per party
    std::vector<int> wraps;     ///< 0/1 per party
    int wrap_sum;               ///< W = Σ_i signs[i]·wraps[i]
    std::int64_t x_flat;        ///< flat index of the setting tuple
};

/// All 2·m^{N−1} branch contexts, α-tuple-major (last α component fastest),
/// X before X̄. Every setting tuple appears in at most one context.
std::vector<AssignmentContext> contexts(const Scenario& s);

/// Evaluates the branch combinations for one deterministic assignment
/// (assignment[i][x−1] = outcome of party i+1 under setting x). Returns
/// (X mod d, X̄ mod d) for the given α-tuple.
std::pair<int, int> x_values(const Scenario& s,
                             const std::vector<std::vector<int>>& assignment,
                             const std::vector<int>& alpha);

/// The Bell functional as a dense table of real coefficients T_{a,x}:
/// I = Σ_{a,x} T_{a,x} p(a|x). Indexed like Behavior.
struct BellFunctional {
    Scenario scenario;
    std::vector<double> table;       ///< settings-major, outcomes-minor
    std::vector<double> residue_coeffs;  ///< the α̂-style vector that produced it
};

/// I(b) for an arbitrary residue-coefficient vector w (length d): each branch
/// context contributes Σ_a w[(Σ_i sign_i·a_i + W) mod d]·p(a|x). Partial sums
/// are accumulated per context so the reduction order is fixed.
double evaluate_residue_form(const Behavior& b, const std::vector<double>& w);

/// I_{N,m,d}(b) = Σ_n α̂_n ℙ_n in the probability picture.
double evaluate_probability_form(const Behavior& b, const CoefficientSet& c);

/// Ĩ_{N,m,d}(t) in the correlator picture:
/// (1/d)·Σ_contexts Σ_{k=1}^{d−1} a_k·ω^{kW}·t(x, k·σ mod d).
/// Throws consistency_error if the imaginary residue exceeds 1e−10.
double evaluate_correlator_form(const CorrelatorTensor& t, const CoefficientSet& c);

/// Materializes the functional as a dense coefficient table.
BellFunctional functional_table_from_residues(const Scenario& s, const std::vector<double>& w);
BellFunctional functional_table(const CoefficientSet& c);

/// Σ T_{a,x} p(a|x) (same per-setting-tuple accumulation order as the direct
/// evaluation).
double evaluate_table(const BellFunctional& f, const Behavior& b);

/// JSON export {"N","m","d","entries":[{"x":[…],"a":[…],"t":…}]} listing
/// nonzero coefficients only, in (x, a) index order. Settings 1-based,
/// outcomes 0-based.
std::string functional_to_json_text(const BellFunctional& f);

}  // namespace bellkit
