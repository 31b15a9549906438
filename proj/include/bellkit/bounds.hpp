#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bellkit/coefficients.hpp"
#include "bellkit/scenario.hpp"

namespace bellkit {

/// Default ceiling on d^{Nm}, the number of deterministic strategies a
/// brute-force classical bound may enumerate.
inline constexpr std::int64_t kDefaultStrategyBudget = 100'000'000;

/// Default ceiling on the number of hybrid vertices enumerated per
/// bipartition when computing the Svetlichny bound exactly.
inline constexpr std::int64_t kDefaultHybridBudget = 10'000'000;

/// One deterministic outcome assignment per (party, setting) slot.
/// Slots are party-major: slot (i−1)·m + (x−1) holds party i's outcome for
/// setting x. The id reads the slots as big-endian base-d digits (slot 0 most
/// significant), so ascending ids enumerate assignments lexicographically.
struct DeterministicStrategy {
    Scenario scenario;
    std::vector<int> outcomes;

    std::int64_t id() const;
    int outcome(int party, int setting) const;
    static DeterministicStrategy from_id(const Scenario& s, std::int64_t id);
};

/// The deterministic behavior realized by a strategy: p(a|x) = 1 on the
/// strategy's outcome tuple, 0 elsewhere.
Behavior strategy_behavior(const DeterministicStrategy& strategy);

/// Value of the expression with residue weights w (length d) on a strategy.
double deterministic_value(const std::vector<double>& w, const DeterministicStrategy& strategy);

enum class BoundKind { classical, svetlichny, nonsignaling };
enum class BoundMethod { enumeration, closed_form, construction };

const char* bound_kind_name(BoundKind kind);
const char* bound_method_name(BoundMethod method);

struct BoundReport {
    BoundKind kind;
    double value = 0.0;
    BoundMethod method = BoundMethod::enumeration;
    /// False when the value is only certified as an upper bound (closed-form
    /// Svetlichny reporting without an enumeration).
    bool exact = true;
    std::optional<DeterministicStrategy> strategy;  ///< classical maximizer
    std::optional<std::vector<int>> group;          ///< bipartition block holding party 1
    std::optional<Behavior> witness_behavior;       ///< attaining behavior, when constructed
    /// Independent re-evaluation of the expression on the witness (NaN when
    /// there is no witness).
    double witness_value = 0.0;
};

/// Exact classical bound by exhaustive enumeration of all d^{Nm}
/// deterministic strategies, OpenMP-parallel over the first party's d^m
/// assignments (most-significant digit blocks) with an ordered reduction, so
/// value and witness are identical across runs and thread counts. Ties keep
/// the lexicographically smallest strategy id. Throws budget_error when
/// d^{Nm} exceeds the budget.
BoundReport classical_bound_bruteforce(const Scenario& s, const std::vector<double>& w,
                                       std::int64_t budget = kDefaultStrategyBudget);
BoundReport classical_bound_bruteforce(const Scenario& s, const CoefficientSet& c,
                                       std::int64_t budget = kDefaultStrategyBudget);

/// Serial reference enumeration (single odometer over all strategy ids in
/// ascending order); kept for testing the parallel kernel and for benchmarks.
BoundReport classical_bound_bruteforce_serial(const Scenario& s, const std::vector<double>& w,
                                              std::int64_t budget = kDefaultStrategyBudget);

/// Closed form for the bipartite classical bound:
/// (1/2d)·tan(π/2m)·[(2m−1)g(0) − g(1−1/m) − 2m·g(⌊d/2⌋)].
double classical_bound_bipartite(int m, int d);

enum class SvetlichnyMode { automatic, enumeration, formula };

/// Svetlichny bound. Formula mode reports m^{N−2}·(bipartite classical bound)
/// — an upper bound, flagged exact=false. Enumeration mode maximizes over all
/// bipartitions {G, Ḡ} with party 1 ∈ G and all hybrid vertices (each side
/// answering as one deterministic function of its joint settings), enumerating
/// the smaller side and best-responding on the larger; throws budget_error if
/// any bipartition exceeds the vertex budget. Automatic mode enumerates when
/// affordable and falls back to the formula otherwise.
BoundReport svetlichny_bound(const Scenario& s, const CoefficientSet& c,
                             SvetlichnyMode mode = SvetlichnyMode::automatic,
                             std::int64_t budget = kDefaultHybridBudget);

/// The algebraic/nonsignaling maximum 2m^{N−1}·α₀ together with a behavior
/// attaining it: on each branch context's setting tuple, probability
/// 1/d^{N−1} is spread uniformly over the outcome tuples whose signed residue
/// vanishes; every remaining setting tuple gets the uniform distribution.
/// Throws consistency_error if two branch contexts claimed the same setting
/// tuple (which would make the assignment ambiguous).
std::pair<double, Behavior> ns_bound_and_behavior(const Scenario& s, const CoefficientSet& c);

}  // namespace bellkit
