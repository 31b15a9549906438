#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace bellkit {

using cplx = std::complex<double>;

/// Integer power for index arithmetic (no floating-point rounding).
std::int64_t ipow(std::int64_t base, int exp);

/// A Bell scenario: N parties, each choosing one of m settings and obtaining
/// one of d outcomes. Canonical conventions used throughout the library:
/// parties i = 1..N, settings x ∈ 1..m, outcomes a ∈ 0..d−1.
struct Scenario {
    int n_parties;   ///< N ≥ 2
    int n_settings;  ///< m ≥ 2
    int n_outcomes;  ///< d ≥ 2

    Scenario(int N, int m, int d);

    std::int64_t setting_tuples() const { return ipow(n_settings, n_parties); }
    std::int64_t outcome_tuples() const { return ipow(n_outcomes, n_parties); }
    std::int64_t table_size() const { return setting_tuples() * outcome_tuples(); }

    /// Flat index of a setting tuple (entries 1..m), settings-major row-major.
    std::int64_t x_index(const std::vector<int>& x) const;
    /// Flat index of an outcome tuple (entries 0..d−1), row-major.
    std::int64_t a_index(const std::vector<int>& a) const;
    /// Inverse of x_index (returns entries in 1..m).
    std::vector<int> x_tuple(std::int64_t xi) const;
    /// Inverse of a_index (returns entries in 0..d−1).
    std::vector<int> a_tuple(std::int64_t ai) const;

    bool operator==(const Scenario& o) const = default;
};

/// The full table of conditional outcome probabilities p(a|x). Storage is
/// settings-major, outcomes-minor, flattened row-major:
/// p[x_index(x) * d^N + a_index(a)].
struct Behavior {
    Scenario scenario;
    std::vector<double> p;

    explicit Behavior(const Scenario& s)
        : scenario(s), p(static_cast<std::size_t>(s.table_size()), 0.0) {}

    double& at(std::int64_t xi, std::int64_t ai) {
        return p[static_cast<std::size_t>(xi * scenario.outcome_tuples() + ai)];
    }
    double at(std::int64_t xi, std::int64_t ai) const {
        return p[static_cast<std::size_t>(xi * scenario.outcome_tuples() + ai)];
    }

    /// Throws std::invalid_argument naming the offending index if any entry
    /// lies outside [0,1] (tolerance 1e−12) or any setting tuple's outcome
    /// distribution is unnormalized (tolerance 1e−10).
    void validate() const;
};

/// Complex tensor of generalized correlators ⟨𝒜₁^{(k₁)}···𝒜_N^{(k_N)}⟩,
/// indexed like Behavior with Fourier indices k ∈ 0..d−1 in place of
/// outcomes.
struct CorrelatorTensor {
    Scenario scenario;
    std::vector<cplx> t;

    explicit CorrelatorTensor(const Scenario& s)
        : scenario(s), t(static_cast<std::size_t>(s.table_size()), cplx{0.0, 0.0}) {}

    cplx& at(std::int64_t xi, std::int64_t ki) {
        return t[static_cast<std::size_t>(xi * scenario.outcome_tuples() + ki)];
    }
    cplx at(std::int64_t xi, std::int64_t ki) const {
        return t[static_cast<std::size_t>(xi * scenario.outcome_tuples() + ki)];
    }
};

/// Discrete Fourier transform of the probabilities:
/// entry(x,k) = Σ_a ω^{a·k} p(a|x), ω = exp(2πi/d).
/// Validates the behavior first.
CorrelatorTensor to_correlators(const Behavior& b);

/// Inverse transform p(a|x) = d^{−N} Σ_k ω^{−a·k} entry(x,k). Throws
/// std::runtime_error ("not a behavior") if any reconstructed probability
/// falls below −1e−9; negative residues above that are clamped to 0.
Behavior to_behavior(const CorrelatorTensor& c);

/// One detected signaling violation: varying party's setting changed the
/// remaining parties' marginal distribution.
struct SignalingViolation {
    int party;                    ///< the party whose setting influences others (1-based)
    std::int64_t marginal_index;  ///< flat index over (settings, outcomes) of the others
    double discrepancy;           ///< max spread of the marginal across that party's settings
};

struct NoSignalingReport {
    std::vector<SignalingViolation> violations;
    double max_discrepancy = 0.0;
    bool empty() const { return violations.empty(); }
};

/// Checks that for every party i the marginal distribution of the other
/// parties is independent of x_i within tolerance 1e−9.
NoSignalingReport check_no_signaling(const Behavior& b);

/// Reads a behavior from a JSON document {"N","m","d","p"} with p flattened
/// row-major; validates the length (m·d)^N and the Behavior invariants.
Behavior behavior_from_json_text(const std::string& text);
Behavior load_behavior(const std::string& path);
std::string behavior_to_json_text(const Behavior& b);

}  // namespace bellkit
