#include "bellkit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bellkit/errors.hpp"
#include "bellkit/expression.hpp"

namespace bellkit {

std::int64_t DeterministicStrategy::id() const {
    std::int64_t r = 0;
    for (int v : outcomes)
        r = r * scenario.n_outcomes + v;
    return r;
}

int DeterministicStrategy::outcome(int party, int setting) const {
    if (party < 1 || party > scenario.n_parties || setting < 1 || setting > scenario.n_settings)
        throw std::invalid_argument("DeterministicStrategy: (party, setting) out of range");
    return outcomes[static_cast<std::size_t>((party - 1) * scenario.n_settings + (setting - 1))];
}

DeterministicStrategy DeterministicStrategy::from_id(const Scenario& s, std::int64_t id) {
    if (id < 0)
        throw std::invalid_argument("DeterministicStrategy: id out of range for this scenario");
    const int slots = s.n_parties * s.n_settings;
    DeterministicStrategy strat{s, std::vector<int>(static_cast<std::size_t>(slots), 0)};
    for (int j = slots - 1; j >= 0; --j) {
        strat.outcomes[static_cast<std::size_t>(j)] = static_cast<int>(id % s.n_outcomes);
        id /= s.n_outcomes;
    }
    if (id != 0)
        throw std::invalid_argument("DeterministicStrategy: id out of range for this scenario");
    return strat;
}

Behavior strategy_behavior(const DeterministicStrategy& strategy) {
    const Scenario& s = strategy.scenario;
    Behavior b(s);
    const std::int64_t block = ipow(s.n_outcomes, s.n_parties);
    for (std::int64_t x = 0; x < ipow(s.n_settings, s.n_parties); ++x) {
        std::vector<int> xt = s.x_tuple(x);
        std::int64_t ai = 0;
        for (int i = 1; i <= s.n_parties; ++i)
            ai = ai * s.n_outcomes + strategy.outcome(i, xt[i - 1]);
        b.p[static_cast<std::size_t>(x * block + ai)] = 1.0;
    }
    return b;
}

namespace {

// The expression flattened for deterministic-strategy evaluation: per branch
// context, N (slot, sign) pairs plus a start residue; residue weights are
// pre-expanded over the whole reachable signed range so the hot loop needs no
// modulo.
struct CompiledExpression {
    int n_parties;
    int n_settings;
    int n_outcomes;
    int n_slots;
    std::vector<int> slots;   // n_ctx × N, party-major slot ids
    std::vector<int> signs;   // n_ctx × N
    std::vector<int> starts;  // n_ctx, normalized wrap residues
    std::vector<double> ext;  // weight lookup over [lo, hi]
    int lo;                   // lowest reachable raw residue
};

CompiledExpression compile_expression(const Scenario& s, const std::vector<double>& w) {
    const int d = s.n_outcomes;
    if (static_cast<int>(w.size()) != d)
        throw std::invalid_argument("need one residue coefficient per outcome value");
    CompiledExpression comp;
    comp.n_parties = s.n_parties;
    comp.n_settings = s.n_settings;
    comp.n_outcomes = d;
    comp.n_slots = s.n_parties * s.n_settings;
    for (const AssignmentContext& ctx : contexts(s)) {
        for (int i = 0; i < s.n_parties; ++i) {
            comp.slots.push_back((i * s.n_settings) + (ctx.settings[i] - 1));
            comp.signs.push_back(ctx.signs[i]);
        }
        comp.starts.push_back(static_cast<int>(((ctx.wrap_sum % d) + d) % d));
    }
    comp.lo = -s.n_parties * (d - 1);
    const int hi = (d - 1) + s.n_parties * (d - 1);
    comp.ext.resize(static_cast<std::size_t>(hi - comp.lo + 1));
    for (int r = comp.lo; r <= hi; ++r)
        comp.ext[static_cast<std::size_t>(r - comp.lo)] = w[static_cast<std::size_t>(((r % d) + d) % d)];
    return comp;
}

double eval_digits(const CompiledExpression& comp, const int* digits) {
    double v = 0.0;
    const int* slot = comp.slots.data();
    const int* sign = comp.signs.data();
    const std::size_t n_ctx = comp.starts.size();
    for (std::size_t c = 0; c < n_ctx; ++c) {
        int r = comp.starts[c];
        for (int i = 0; i < comp.n_parties; ++i)
            r += sign[i] * digits[slot[i]];
        v += comp.ext[static_cast<std::size_t>(r - comp.lo)];
        slot += comp.n_parties;
        sign += comp.n_parties;
    }
    return v;
}

// Total strategy count d^{slots} if it fits under `cap`, otherwise −1.
std::int64_t checked_power(int d, int slots, std::int64_t cap) {
    std::int64_t total = 1;
    for (int j = 0; j < slots; ++j) {
        if (total > cap / d) return -1;
        total *= d;
    }
    return total;
}

std::string power_text(int d, int slots) {
    return std::to_string(d) + "^" + std::to_string(slots);
}

void check_strategy_budget(const Scenario& s, std::int64_t budget) {
    const int slots = s.n_parties * s.n_settings;
    const std::int64_t total = checked_power(s.n_outcomes, slots, std::numeric_limits<std::int64_t>::max());
    if (total < 0 || total > budget) {
        const std::string count =
            total < 0 ? "> 9.2e18" : std::to_string(total);
        throw budget_error("scenario too large: d^{Nm} = " + power_text(s.n_outcomes, slots) + " = " +
                           count + " deterministic strategies exceeds the budget of " +
                           std::to_string(budget));
    }
}

BoundReport finish_classical_report(const Scenario& s, const std::vector<double>& w,
                                    double best, std::int64_t best_id) {
    BoundReport report;
    report.kind = BoundKind::classical;
    report.method = BoundMethod::enumeration;
    report.exact = true;
    report.value = best;
    report.strategy = DeterministicStrategy::from_id(s, best_id);
    report.witness_value = deterministic_value(w, *report.strategy);
    return report;
}

}  // namespace

double deterministic_value(const std::vector<double>& w, const DeterministicStrategy& strategy) {
    const CompiledExpression comp = compile_expression(strategy.scenario, w);
    return eval_digits(comp, strategy.outcomes.data());
}

BoundReport classical_bound_bruteforce(const Scenario& s, const std::vector<double>& w,
                                       std::int64_t budget) {
    check_strategy_budget(s, budget);
    const CompiledExpression comp = compile_expression(s, w);
    const int d = s.n_outcomes;
    const int slots = comp.n_slots;
    const int first_slots = s.n_settings;
    const std::int64_t n_first = ipow(d, first_slots);
    const std::int64_t n_rest = ipow(d, slots - first_slots);

    std::vector<double> block_best(static_cast<std::size_t>(n_first),
                                   -std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> block_arg(static_cast<std::size_t>(n_first), 0);

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t f = 0; f < n_first; ++f) {
        std::vector<int> digits(static_cast<std::size_t>(slots), 0);
        std::int64_t tmp = f;
        for (int j = first_slots - 1; j >= 0; --j) {
            digits[static_cast<std::size_t>(j)] = static_cast<int>(tmp % d);
            tmp /= d;
        }
        double best = -std::numeric_limits<double>::infinity();
        std::int64_t arg = 0;
        for (std::int64_t inner = 0; inner < n_rest; ++inner) {
            const double v = eval_digits(comp, digits.data());
            if (v > best) {
                best = v;
                arg = inner;
            }
            int pos = slots - 1;
            while (pos >= first_slots && digits[static_cast<std::size_t>(pos)] == d - 1) {
                digits[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos >= first_slots) ++digits[static_cast<std::size_t>(pos)];
        }
        block_best[static_cast<std::size_t>(f)] = best;
        block_arg[static_cast<std::size_t>(f)] = arg;
    }

    // Ordered reduction over blocks: strict improvement keeps the earliest
    // (lexicographically smallest) maximizer.
    double best = -std::numeric_limits<double>::infinity();
    std::int64_t best_id = 0;
    for (std::int64_t f = 0; f < n_first; ++f) {
        if (block_best[static_cast<std::size_t>(f)] > best) {
            best = block_best[static_cast<std::size_t>(f)];
            best_id = f * n_rest + block_arg[static_cast<std::size_t>(f)];
        }
    }
    return finish_classical_report(s, w, best, best_id);
}

BoundReport classical_bound_bruteforce(const Scenario& s, const CoefficientSet& c,
                                       std::int64_t budget) {
    if (!(s == c.scenario))
        throw std::invalid_argument("classical_bound_bruteforce: coefficients belong to a different scenario");
    return classical_bound_bruteforce(s, c.alpha_hat, budget);
}

BoundReport classical_bound_bruteforce_serial(const Scenario& s, const std::vector<double>& w,
                                              std::int64_t budget) {
    check_strategy_budget(s, budget);
    const CompiledExpression comp = compile_expression(s, w);
    const int d = s.n_outcomes;
    const int slots = comp.n_slots;
    const std::int64_t total = ipow(d, slots);
    std::vector<int> digits(static_cast<std::size_t>(slots), 0);
    double best = -std::numeric_limits<double>::infinity();
    std::int64_t best_id = 0;
    for (std::int64_t id = 0; id < total; ++id) {
        const double v = eval_digits(comp, digits.data());
        if (v > best) {
            best = v;
            best_id = id;
        }
        int pos = slots - 1;
        while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == d - 1) {
            digits[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos >= 0) ++digits[static_cast<std::size_t>(pos)];
    }
    return finish_classical_report(s, w, best, best_id);
}

double classical_bound_bipartite(int m, int d) {
    if (m < 2 || d < 2)
        throw std::invalid_argument("classical_bound_bipartite: need m >= 2 and d >= 2");
    const int h = d / 2;
    const double t = std::tan(std::acos(-1.0) / (2 * m));
    return (1.0 / (2 * d)) * t *
           ((2 * m - 1) * coefficient_g(m, 0.0, d) - coefficient_g(m, 1.0 - 1.0 / m, d) -
            2 * m * coefficient_g(m, static_cast<double>(h), d));
}

const char* bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::classical: return "classical";
        case BoundKind::svetlichny: return "svetlichny";
        case BoundKind::nonsignaling: return "nonsignaling";
    }
    return "unknown";
}

const char* bound_method_name(BoundMethod method) {
    switch (method) {
        case BoundMethod::enumeration: return "enumeration";
        case BoundMethod::closed_form: return "closed-form";
        case BoundMethod::construction: return "construction";
    }
    return "unknown";
}

namespace {

std::vector<std::vector<int>> index_tuples(int length, int base) {
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(ipow(base, length)));
    std::vector<int> cur(static_cast<std::size_t>(length), 0);
    while (true) {
        out.push_back(cur);
        int pos = length - 1;
        while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == base - 1) {
            cur[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++cur[static_cast<std::size_t>(pos)];
    }
    return out;
}

struct HybridResult {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<int> group;                 // parties on the side containing party 1
    std::vector<int> side_s;                // enumerated side (parties, 1-based)
    std::vector<int> side_l;                // best-response side
    std::vector<int> best_fs;               // enumerated side's outcome index per joint setting
    std::vector<int> best_resp;             // responder's outcome index per joint setting
};

}  // namespace

BoundReport svetlichny_bound(const Scenario& s, const CoefficientSet& c, SvetlichnyMode mode,
                             std::int64_t budget) {
    if (!(s == c.scenario))
        throw std::invalid_argument("svetlichny_bound: coefficients belong to a different scenario");
    const int n = s.n_parties;
    const int m = s.n_settings;
    const int d = s.n_outcomes;

    const double formula_value = static_cast<double>(ipow(m, n - 2)) * classical_bound_bipartite(m, d);
    if (mode == SvetlichnyMode::formula) {
        BoundReport report;
        report.kind = BoundKind::svetlichny;
        report.value = formula_value;
        report.method = BoundMethod::closed_form;
        report.exact = false;  // certified as an upper bound only
        report.witness_value = std::numeric_limits<double>::quiet_NaN();
        return report;
    }

    // Check every bipartition's enumerated-side vertex count against the
    // budget before starting.
    for (std::int64_t mask = 0; mask < (std::int64_t{1} << (n - 1)); ++mask) {
        int size_g = 1;
        for (int b = 0; b < n - 1; ++b)
            if (mask & (std::int64_t{1} << b)) ++size_g;
        if (size_g == n) continue;
        const int size_small = std::min(size_g, n - size_g);
        // vertices of the smaller side: (d^{size})^{m^{size}} = d^{size·m^{size}}
        const std::int64_t exponent = static_cast<std::int64_t>(size_small) * ipow(m, size_small);
        const std::int64_t vertices =
            exponent > 62 ? -1 : checked_power(d, static_cast<int>(exponent),
                                               std::numeric_limits<std::int64_t>::max());
        if (vertices < 0 || vertices > budget) {
            if (mode == SvetlichnyMode::enumeration)
                throw budget_error(
                    "svetlichny enumeration too large: a bipartition needs " +
                    power_text(d, static_cast<int>(exponent)) + " hybrid vertices, budget is " +
                    std::to_string(budget));
            BoundReport report;
            report.kind = BoundKind::svetlichny;
            report.value = formula_value;
            report.method = BoundMethod::closed_form;
            report.exact = false;
            report.witness_value = std::numeric_limits<double>::quiet_NaN();
            return report;
        }
    }

    const BellFunctional functional = functional_table(c);
    const std::int64_t a_block = ipow(d, n);
    HybridResult best;

    for (std::int64_t mask = 0; mask < (std::int64_t{1} << (n - 1)); ++mask) {
        std::vector<int> group{1};
        for (int b = 0; b < n - 1; ++b)
            if (mask & (std::int64_t{1} << b)) group.push_back(b + 2);
        if (static_cast<int>(group.size()) == n) continue;
        std::vector<int> rest;
        for (int i = 1; i <= n; ++i)
            if (std::find(group.begin(), group.end(), i) == group.end()) rest.push_back(i);

        auto vertex_cost = [&](const std::vector<int>& side) {
            return static_cast<std::int64_t>(side.size()) * ipow(m, static_cast<int>(side.size()));
        };
        std::vector<int> side_s = group, side_l = rest;
        if (vertex_cost(side_s) > vertex_cost(side_l)) std::swap(side_s, side_l);

        const int ns_parties = static_cast<int>(side_s.size());
        const int nl_parties = static_cast<int>(side_l.size());
        const auto xs_list = index_tuples(ns_parties, m);
        const auto as_list = index_tuples(ns_parties, d);
        const auto xl_list = index_tuples(nl_parties, m);
        const auto al_list = index_tuples(nl_parties, d);

        // Reorder the functional's table as TR[ixS][iaS][ixL][iaL].
        const std::size_t n_xs = xs_list.size(), n_as = as_list.size();
        const std::size_t n_xl = xl_list.size(), n_al = al_list.size();
        std::vector<double> tr(n_xs * n_as * n_xl * n_al);
        std::vector<int> xt(static_cast<std::size_t>(n)), at(static_cast<std::size_t>(n));
        for (std::size_t ixs = 0; ixs < n_xs; ++ixs)
            for (std::size_t ias = 0; ias < n_as; ++ias)
                for (std::size_t ixl = 0; ixl < n_xl; ++ixl)
                    for (std::size_t ial = 0; ial < n_al; ++ial) {
                        for (int j = 0; j < ns_parties; ++j) {
                            xt[static_cast<std::size_t>(side_s[j] - 1)] = xs_list[ixs][j] + 1;
                            at[static_cast<std::size_t>(side_s[j] - 1)] = as_list[ias][j];
                        }
                        for (int j = 0; j < nl_parties; ++j) {
                            xt[static_cast<std::size_t>(side_l[j] - 1)] = xl_list[ixl][j] + 1;
                            at[static_cast<std::size_t>(side_l[j] - 1)] = al_list[ial][j];
                        }
                        tr[((ixs * n_as + ias) * n_xl + ixl) * n_al + ial] =
                            functional.table[static_cast<std::size_t>(s.x_index(xt) * a_block +
                                                                      s.a_index(at))];
                    }

        // Enumerate the small side's strategies; the large side best-responds
        // per joint setting.
        std::vector<int> fs(n_xs, 0);
        std::vector<int> resp(n_xl, 0);
        std::vector<int> best_resp(n_xl, 0);
        while (true) {
            double val = 0.0;
            for (std::size_t ixl = 0; ixl < n_xl; ++ixl) {
                double cbest = -std::numeric_limits<double>::infinity();
                int cidx = 0;
                for (std::size_t ial = 0; ial < n_al; ++ial) {
                    double contrib = 0.0;
                    for (std::size_t ixs = 0; ixs < n_xs; ++ixs)
                        contrib += tr[((ixs * n_as + static_cast<std::size_t>(fs[ixs])) * n_xl + ixl) *
                                          n_al +
                                      ial];
                    if (contrib > cbest) {
                        cbest = contrib;
                        cidx = static_cast<int>(ial);
                    }
                }
                val += cbest;
                resp[ixl] = cidx;
            }
            if (val > best.value) {
                best.value = val;
                best.group = group;
                best.side_s = side_s;
                best.side_l = side_l;
                best.best_fs = fs;
                best.best_resp = resp;
            }
            std::size_t pos = n_xs;
            while (pos > 0 && fs[pos - 1] == static_cast<int>(n_as) - 1) {
                fs[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
            ++fs[pos - 1];
        }
    }

    // Materialize the winning hybrid as a deterministic behavior.
    Behavior witness(s);
    {
        const auto as_list = index_tuples(static_cast<int>(best.side_s.size()), d);
        const auto al_list = index_tuples(static_cast<int>(best.side_l.size()), d);
        for (std::int64_t x = 0; x < ipow(m, n); ++x) {
            std::vector<int> xt = s.x_tuple(x);
            std::int64_t ixs = 0, ixl = 0;
            for (std::size_t j = 0; j < best.side_s.size(); ++j)
                ixs = ixs * m + (xt[static_cast<std::size_t>(best.side_s[j] - 1)] - 1);
            for (std::size_t j = 0; j < best.side_l.size(); ++j)
                ixl = ixl * m + (xt[static_cast<std::size_t>(best.side_l[j] - 1)] - 1);
            const std::vector<int>& as_t = as_list[static_cast<std::size_t>(
                best.best_fs[static_cast<std::size_t>(ixs)])];
            const std::vector<int>& al_t = al_list[static_cast<std::size_t>(
                best.best_resp[static_cast<std::size_t>(ixl)])];
            std::vector<int> at(static_cast<std::size_t>(n), 0);
            for (std::size_t j = 0; j < best.side_s.size(); ++j)
                at[static_cast<std::size_t>(best.side_s[j] - 1)] = as_t[j];
            for (std::size_t j = 0; j < best.side_l.size(); ++j)
                at[static_cast<std::size_t>(best.side_l[j] - 1)] = al_t[j];
            witness.p[static_cast<std::size_t>(x * a_block + s.a_index(at))] = 1.0;
        }
    }

    BoundReport report;
    report.kind = BoundKind::svetlichny;
    report.value = best.value;
    report.method = BoundMethod::enumeration;
    report.exact = true;
    report.group = best.group;
    report.witness_behavior = witness;
    report.witness_value = evaluate_residue_form(witness, c.alpha_hat);
    return report;
}

std::pair<double, Behavior> ns_bound_and_behavior(const Scenario& s, const CoefficientSet& c) {
    if (!(s == c.scenario))
        throw std::invalid_argument("ns_bound_and_behavior: coefficients belong to a different scenario");
    const int d = s.n_outcomes;
    const std::int64_t block = ipow(d, s.n_parties);
    const double bound = 2.0 * static_cast<double>(ipow(s.n_settings, s.n_parties - 1)) * c.alpha[0];

    Behavior b(s);
    std::fill(b.p.begin(), b.p.end(), 1.0 / static_cast<double>(block));
    std::vector<bool> claimed(static_cast<std::size_t>(ipow(s.n_settings, s.n_parties)), false);
    const double support = 1.0 / static_cast<double>(ipow(d, s.n_parties - 1));
    std::vector<int> a(static_cast<std::size_t>(s.n_parties), 0);
    for (const AssignmentContext& ctx : contexts(s)) {
        if (claimed[static_cast<std::size_t>(ctx.x_flat)])
            throw consistency_error(
                "nonsignaling construction: setting tuple " + std::to_string(ctx.x_flat) +
                " is claimed by two branch contexts, so the assignment would be ambiguous");
        claimed[static_cast<std::size_t>(ctx.x_flat)] = true;
        double* row = b.p.data() + ctx.x_flat * block;
        std::fill(a.begin(), a.end(), 0);
        long long residue = ((ctx.wrap_sum % d) + d) % d;
        for (std::int64_t ai = 0;; ++ai) {
            row[ai] = (residue == 0) ? support : 0.0;
            int pos = s.n_parties - 1;
            while (pos >= 0 && a[pos] == d - 1) {
                residue -= static_cast<long long>(ctx.signs[pos]) * (d - 1);
                a[pos] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++a[pos];
            residue += ctx.signs[pos];
            residue = ((residue % d) + d) % d;
        }
    }
    return {bound, std::move(b)};
}

}  // namespace bellkit
