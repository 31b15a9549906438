#pragma once

#include <vector>

#include "bellkit/scenario.hpp"

namespace bellkit {

/// The coefficients defining one inequality of the family for a scenario
/// (N,m,d): the probability-picture coefficients α_n, β_n (n = 0..⌊d/2⌋−1),
/// the merged vector α̂_n (n = 0..d−1), the correlator-picture coefficients
/// a_k (k = 1..d−1) and the constant shift S relating the two pictures.
struct CoefficientSet {
    Scenario scenario;
    std::vector<double> alpha;      ///< α_n, length ⌊d/2⌋
    std::vector<double> beta;       ///< β_n, length ⌊d/2⌋
    std::vector<double> alpha_hat;  ///< α̂_n, length d (α̂_n = α_n below ⌊d/2⌋, −β_{d−1−n} above, 0 in the middle for odd d)
    std::vector<cplx> a;            ///< a_k for k = 1..d−1 (a[k−1]); a_{d−k} = conj(a_k)
    double shift = 0.0;             ///< S = Σ_n (α_n − β_n)
};

/// g_m(x) = cot(π[x + 1/(2m)]/d); the generating function behind all
/// probability-picture coefficients.
double coefficient_g(int m, double x, int d);

/// Builds the full coefficient set:
///   α_n = (1/2d)·tan(π/2m)·[g_m(n) − g_m(⌊d/2⌋)]
///   β_n = (1/2d)·tan(π/2m)·[g_m(n+1−1/m) + g_m(⌊d/2⌋)]
///   a_k = ω^{(2k−d)/(4m)} / [2cos(π/2m)]   (ω^x = exp(2πi·x/d))
///   S   = (1/2)·[1 − tan(π/2m)·g_m(⌊d/2⌋)]
CoefficientSet make_coefficients(const Scenario& s);

/// Result of the internal consistency audit of a CoefficientSet.
struct ConsistencyReport {
    bool ok = false;
    double max_residual = 0.0;  ///< worst |Σ_n(α_n ω^{−kn} − β_n ω^{k(n+1)}) − a_k|
    int worst_k = 0;            ///< the k attaining it
};

/// Verifies the defining linear system relating (α, β) to a_k for
/// k = 1..⌊d/2⌋ within tolerance 1e−12, and that α_0 ≥ α̂_n for all n.
ConsistencyReport verify_consistency(const CoefficientSet& c);

}  // namespace bellkit
