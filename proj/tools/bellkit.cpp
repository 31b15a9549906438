#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "bellkit/bounds.hpp"
#include "bellkit/coefficients.hpp"
#include "bellkit/errors.hpp"
#include "bellkit/expression.hpp"
#include "bellkit/quantum.hpp"
#include "bellkit/scenario.hpp"
#include "bellkit/sos.hpp"
#include "bellkit/tilted.hpp"
#include "bellkit/tolerances.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Minimal ordered JSON emission: keys appear exactly in insertion order and
// floats are printed with 17 significant digits, so identical inputs yield
// byte-identical payloads.
// ---------------------------------------------------------------------------

std::string jnum(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string jint(long long v) { return std::to_string(v); }

std::string jstr(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string jbool(bool b) { return b ? "true" : "false"; }

class JsonObject {
public:
    JsonObject& field(const std::string& key, const std::string& raw_value) {
        if (!body_.empty()) body_ += ',';
        body_ += jstr(key) + ":" + raw_value;
        return *this;
    }
    std::string str() const { return "{" + body_ + "}"; }

private:
    std::string body_;
};

std::string jarray(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += items[i];
    }
    out += ']';
    return out;
}

std::string jnum_array(const std::vector<double>& values) {
    std::vector<std::string> items;
    items.reserve(values.size());
    for (double v : values) items.push_back(jnum(v));
    return jarray(items);
}

std::string jint_array(const std::vector<int>& values) {
    std::vector<std::string> items;
    items.reserve(values.size());
    for (int v : values) items.push_back(jint(v));
    return jarray(items);
}

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

std::int64_t env_budget(std::int64_t fallback) {
    const char* raw = std::getenv("BELLKIT_BUDGET");
    if (raw == nullptr || *raw == '\0') return fallback;
    char* end = nullptr;
    const long long v = std::strtoll(raw, &end, 10);
    if (end == raw || *end != '\0' || v <= 0)
        throw CLI::ValidationError("BELLKIT_BUDGET", "must be a positive integer, got '" +
                                                         std::string(raw) + "'");
    return v;
}

struct Payload {
    std::string params_json;   // scenario parameters echoed into the report
    std::string results_json;  // command results (JSON mode)
    std::string csv_text;      // set instead of results_json in CSV mode
    std::optional<long long> seed;
};

std::string run_report(const std::string& command, const Payload& payload, int threads_used) {
    JsonObject report;
    report.field("command", jstr(command));
    report.field("params", payload.params_json);
    report.field("threads", jint(threads_used));
    report.field("version", jstr(kVersion));
    if (payload.seed) report.field("seed", jint(*payload.seed));
    report.field("results", payload.results_json);
    return report.str();
}

std::string bound_report_json(const bellkit::BoundReport& r) {
    JsonObject obj;
    obj.field("kind", jstr(bellkit::bound_kind_name(r.kind)));
    obj.field("value", jnum(r.value));
    obj.field("method", jstr(bellkit::bound_method_name(r.method)));
    obj.field("exact", jbool(r.exact));
    if (!r.exact) obj.field("label", jstr("upper bound"));
    if (r.strategy) {
        obj.field("strategy_id", jint(r.strategy->id()));
        obj.field("strategy", jint_array(r.strategy->outcomes));
    }
    if (r.group) obj.field("group", jint_array(*r.group));
    if (r.strategy || r.witness_behavior) obj.field("witness_value", jnum(r.witness_value));
    return obj.str();
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

Payload run_coeffs(int n, int m, int d) {
    const bellkit::Scenario s(n, m, d);
    const bellkit::CoefficientSet c = bellkit::make_coefficients(s);
    const bellkit::ConsistencyReport consistency = bellkit::verify_consistency(c);

    std::vector<std::string> a_pairs;
    for (const bellkit::cplx& ak : c.a)
        a_pairs.push_back(jarray({jnum(ak.real()), jnum(ak.imag())}));

    Payload payload;
    payload.params_json =
        JsonObject().field("N", jint(n)).field("m", jint(m)).field("d", jint(d)).str();
    payload.results_json =
        JsonObject()
            .field("alpha", jnum_array(c.alpha))
            .field("beta", jnum_array(c.beta))
            .field("alpha_hat", jnum_array(c.alpha_hat))
            .field("a", jarray(a_pairs))
            .field("shift", jnum(c.shift))
            .field("consistency", JsonObject()
                                      .field("ok", jbool(consistency.ok))
                                      .field("max_residual", jnum(consistency.max_residual))
                                      .field("worst_k", jint(consistency.worst_k))
                                      .str())
            .str();
    return payload;
}

bellkit::SvetlichnyMode parse_mode(const std::string& mode) {
    if (mode == "auto") return bellkit::SvetlichnyMode::automatic;
    if (mode == "enumerate") return bellkit::SvetlichnyMode::enumeration;
    if (mode == "formula") return bellkit::SvetlichnyMode::formula;
    throw CLI::ValidationError("--mode", "must be one of auto|enumerate|formula");
}

std::string ns_report_json(const bellkit::Scenario& s, const bellkit::CoefficientSet& c,
                           bool emit_behavior) {
    const auto [bound, behavior] = bellkit::ns_bound_and_behavior(s, c);
    const bellkit::NoSignalingReport ns = bellkit::check_no_signaling(behavior);
    const double value = bellkit::evaluate_probability_form(behavior, c);
    JsonObject obj;
    obj.field("kind", jstr("nonsignaling"));
    obj.field("value", jnum(bound));
    obj.field("method", jstr("construction"));
    obj.field("exact", jbool(true));
    obj.field("evaluated_value", jnum(value));
    obj.field("max_signaling_discrepancy", jnum(ns.max_discrepancy));
    obj.field("signaling_violations", jint(static_cast<long long>(ns.violations.size())));
    if (emit_behavior) obj.field("behavior", bellkit::behavior_to_json_text(behavior));
    return obj.str();
}

Payload run_bounds(int n, int m, int d, const std::string& kind, const std::string& mode) {
    const bellkit::Scenario s(n, m, d);
    const bellkit::CoefficientSet c = bellkit::make_coefficients(s);
    const std::int64_t strategy_budget = env_budget(bellkit::kDefaultStrategyBudget);
    const std::int64_t hybrid_budget = env_budget(bellkit::kDefaultHybridBudget);

    Payload payload;
    payload.params_json = JsonObject()
                              .field("N", jint(n))
                              .field("m", jint(m))
                              .field("d", jint(d))
                              .field("kind", jstr(kind))
                              .field("mode", jstr(mode))
                              .str();
    if (kind == "classical") {
        payload.results_json =
            bound_report_json(bellkit::classical_bound_bruteforce(s, c, strategy_budget));
    } else if (kind == "svetlichny") {
        payload.results_json =
            bound_report_json(bellkit::svetlichny_bound(s, c, parse_mode(mode), hybrid_budget));
    } else if (kind == "ns") {
        payload.results_json = ns_report_json(s, c, false);
    } else if (kind == "all") {
        const bellkit::BoundReport classical =
            bellkit::classical_bound_bruteforce(s, c, strategy_budget);
        const bellkit::BoundReport svet =
            bellkit::svetlichny_bound(s, c, parse_mode(mode), hybrid_budget);
        const auto [ns_bound, ns_behavior] = bellkit::ns_bound_and_behavior(s, c);
        (void)ns_behavior;
        const bool ordered = classical.value <= svet.value + 1e-9 && svet.value <= ns_bound + 1e-9;
        payload.results_json = JsonObject()
                                   .field("classical", bound_report_json(classical))
                                   .field("svetlichny", bound_report_json(svet))
                                   .field("nonsignaling", ns_report_json(s, c, false))
                                   .field("ordering_ok", jbool(ordered))
                                   .str();
    } else {
        throw CLI::ValidationError("--kind", "must be one of classical|svetlichny|ns|all");
    }
    return payload;
}

Payload run_quantum(int n, int m, int d) {
    const bellkit::Scenario s(n, m, d);
    const bellkit::CoefficientSet c = bellkit::make_coefficients(s);
    const bellkit::Behavior b = bellkit::ghz_behavior(s);
    const bellkit::CorrelatorTensor t = bellkit::to_correlators(b);
    const double i_tilde = bellkit::evaluate_correlator_form(t, c);
    const double i_value = bellkit::evaluate_probability_form(b, c);

    Payload payload;
    payload.params_json =
        JsonObject().field("N", jint(n)).field("m", jint(m)).field("d", jint(d)).str();
    payload.results_json =
        JsonObject()
            .field("I_tilde", jnum(i_tilde))
            .field("I", jnum(i_value))
            .field("quantum_bound_correlator", jnum(bellkit::quantum_bound_correlator(s)))
            .field("quantum_bound_probability", jnum(bellkit::quantum_bound_probability(s, c)))
            .field("stabilizer_deviation", jnum(bellkit::verify_stabilizer(s)))
            .field("uniformity_spread", jnum(bellkit::uniformity_spread(b)))
            .str();
    return payload;
}

Payload run_ns(int n, int m, int d, bool emit_behavior) {
    const bellkit::Scenario s(n, m, d);
    const bellkit::CoefficientSet c = bellkit::make_coefficients(s);
    Payload payload;
    payload.params_json =
        JsonObject().field("N", jint(n)).field("m", jint(m)).field("d", jint(d)).str();
    payload.results_json = ns_report_json(s, c, emit_behavior);
    return payload;
}

Payload run_sos_check(int n, int m, int d, int trials, long long seed) {
    const bellkit::Scenario s(n, m, d);
    const bellkit::CoefficientSet c = bellkit::make_coefficients(s);

    bellkit::SosReport worst = bellkit::sos_residual(bellkit::optimal_observables(s), c);
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    for (int trial = 0; trial < trials; ++trial) {
        const bellkit::SosReport r = bellkit::sos_residual(bellkit::random_observables(s, rng), c);
        worst.residual_max = std::max(worst.residual_max, r.residual_max);
        worst.min_eigenvalue = std::min(worst.min_eigenvalue, r.min_eigenvalue);
    }

    Payload payload;
    payload.params_json =
        JsonObject().field("N", jint(n)).field("m", jint(m)).field("d", jint(d)).str();
    payload.seed = seed;
    payload.results_json = JsonObject()
                               .field("residual_max", jnum(worst.residual_max))
                               .field("min_eig", jnum(worst.min_eigenvalue))
                               .field("trials", jint(trials))
                               .str();
    return payload;
}

Payload run_tilted_scan(int n, double xi_min, double xi_max, double step,
                        const std::string& format) {
    const std::vector<bellkit::TiltedScanRow> rows = bellkit::tilted_scan(n, xi_min, xi_max, step);
    Payload payload;
    payload.params_json = JsonObject()
                              .field("N", jint(n))
                              .field("xi_min", jnum(xi_min))
                              .field("xi_max", jnum(xi_max))
                              .field("step", jnum(step))
                              .str();
    if (format == "csv") {
        std::string text = "xi,gamma_opt,classical_bound,realized_quantum,conjectured_max,ratio\n";
        for (const bellkit::TiltedScanRow& row : rows) {
            text += jnum(row.xi) + "," + jnum(row.gamma_opt) + "," + jnum(row.classical_bound) +
                    "," + jnum(row.realized_quantum) + "," + jnum(row.conjectured_max) + "," +
                    jnum(row.ratio) + "\n";
        }
        payload.csv_text = text;
    } else {
        std::vector<std::string> items;
        for (const bellkit::TiltedScanRow& row : rows)
            items.push_back(JsonObject()
                                .field("xi", jnum(row.xi))
                                .field("gamma_opt", jnum(row.gamma_opt))
                                .field("classical_bound", jnum(row.classical_bound))
                                .field("realized_quantum", jnum(row.realized_quantum))
                                .field("conjectured_max", jnum(row.conjectured_max))
                                .field("ratio", jnum(row.ratio))
                                .str());
        payload.results_json = JsonObject().field("rows", jarray(items)).str();
    }
    return payload;
}

struct TableCell {
    int table;
    std::string row;  // "classical" or "svetlichny"
    int n, m, d;
    std::optional<double> reference;  // 4-digit reference constant, when printed
    double computed;
    std::string method;
    bool exact;
};

std::vector<TableCell> compute_table(int which, std::int64_t strategy_budget,
                                     std::int64_t hybrid_budget) {
    const int n = (which == 1) ? 3 : 4;
    // Reference constants from the published comparison tables (4 digits).
    // Missing entry: table 2, m=3, d=4 classical — computed here, labeled derived.
    struct Ref {
        int m, d;
        double classical, svetlichny;
    };
    const std::vector<Ref> refs_t1 = {
        {2, 2, 4.2426, 4.2426}, {2, 3, 3.0416, 3.0416}, {2, 4, 3.5953, 3.5953},
        {3, 2, 7.5056, 8.6603}, {3, 3, 6.1760, 7.3132}, {3, 4, 6.9765, 8.1115},
    };
    const std::vector<Ref> refs_t2 = {
        {2, 2, 7.0711, 8.4853},  {2, 3, 4.7169, 6.0829},  {2, 4, 5.8301, 7.1905},
        {3, 2, 20.2073, 25.9808}, {3, 3, 16.2537, 21.9394}, {3, 4, -1.0, 24.3345},
    };
    const std::vector<Ref>& refs = (which == 1) ? refs_t1 : refs_t2;

    std::vector<TableCell> cells;
    for (const Ref& ref : refs) {
        const bellkit::Scenario s(n, ref.m, ref.d);
        const bellkit::CoefficientSet c = bellkit::make_coefficients(s);

        TableCell classical;
        classical.table = which;
        classical.row = "classical";
        classical.n = n;
        classical.m = ref.m;
        classical.d = ref.d;
        if (!(which == 2 && ref.m == 3 && ref.d == 4)) classical.reference = ref.classical;
        const bellkit::BoundReport cb = bellkit::classical_bound_bruteforce(s, c, strategy_budget);
        classical.computed = cb.value;
        classical.method = bellkit::bound_method_name(cb.method);
        classical.exact = cb.exact;
        cells.push_back(classical);

        TableCell svet;
        svet.table = which;
        svet.row = "svetlichny";
        svet.n = n;
        svet.m = ref.m;
        svet.d = ref.d;
        svet.reference = ref.svetlichny;
        const bellkit::BoundReport sb =
            bellkit::svetlichny_bound(s, c, bellkit::SvetlichnyMode::automatic, hybrid_budget);
        svet.computed = sb.value;
        svet.method = bellkit::bound_method_name(sb.method);
        svet.exact = sb.exact;
        cells.push_back(svet);
    }
    return cells;
}

Payload run_tables(int which, const std::string& format) {
    if (which != 1 && which != 2)
        throw CLI::ValidationError("--which", "must be 1 or 2");
    const std::int64_t strategy_budget = env_budget(bellkit::kDefaultStrategyBudget);
    const std::int64_t hybrid_budget = env_budget(bellkit::kDefaultHybridBudget);
    const std::vector<TableCell> cells = compute_table(which, strategy_budget, hybrid_budget);

    Payload payload;
    payload.params_json = JsonObject().field("which", jint(which)).str();
    if (format == "csv") {
        std::string text = "table,row,N,m,d,reference,computed,delta,method,label\n";
        for (const TableCell& cell : cells) {
            text += jint(cell.table) + "," + cell.row + "," + jint(cell.n) + "," + jint(cell.m) +
                    "," + jint(cell.d) + ",";
            text += cell.reference ? jnum(*cell.reference) : "";
            text += "," + jnum(cell.computed) + ",";
            text += cell.reference ? jnum(cell.computed - *cell.reference) : "";
            text += "," + cell.method + ",";
            text += cell.reference ? (cell.exact ? "reference" : "upper bound")
                                   : "derived (no reference value)";
            text += "\n";
        }
        payload.csv_text = text;
    } else {
        std::vector<std::string> items;
        for (const TableCell& cell : cells) {
            JsonObject obj;
            obj.field("table", jint(cell.table));
            obj.field("row", jstr(cell.row));
            obj.field("N", jint(cell.n));
            obj.field("m", jint(cell.m));
            obj.field("d", jint(cell.d));
            if (cell.reference) {
                obj.field("reference", jnum(*cell.reference));
                obj.field("computed", jnum(cell.computed));
                obj.field("delta", jnum(cell.computed - *cell.reference));
                obj.field("label", jstr(cell.exact ? "reference" : "upper bound"));
            } else {
                obj.field("computed", jnum(cell.computed));
                obj.field("label", jstr("derived (no reference value)"));
            }
            obj.field("method", jstr(cell.method));
            items.push_back(obj.str());
        }
        payload.results_json = JsonObject().field("cells", jarray(items)).str();
    }
    return payload;
}

// ---------------------------------------------------------------------------
// verify-all: drives the exact cross-module invariants on a fast default grid.
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool pass;
    double worst;
};

Payload run_verify_all(double perturb) {
    std::vector<CheckResult> checks;

    {  // Coefficient self-consistency across a wide (m, d) grid.
        double worst = 0.0;
        bool ok = true;
        for (int m = 2; m <= 5; ++m)
            for (int d = 2; d <= 8; ++d) {
                bellkit::CoefficientSet c = bellkit::make_coefficients(bellkit::Scenario(2, m, d));
                if (perturb != 0.0) {
                    c.alpha[0] += perturb;
                    c.alpha_hat[0] += perturb;
                }
                const bellkit::ConsistencyReport r = bellkit::verify_consistency(c);
                worst = std::max(worst, r.max_residual);
                ok = ok && r.ok;
            }
        checks.push_back({"coefficient-consistency", ok, worst});
    }

    {  // Stabilizer, uniformity, and the correlator value on the GHZ realization.
        double worst_stab = 0.0, worst_unif = 0.0, worst_val = 0.0;
        for (int n = 2; n <= 3; ++n)
            for (int m = 2; m <= 3; ++m)
                for (int d = 2; d <= 4; ++d) {
                    const bellkit::Scenario s(n, m, d);
                    const bellkit::CoefficientSet c = bellkit::make_coefficients(s);
                    worst_stab = std::max(worst_stab, bellkit::verify_stabilizer(s));
                    const bellkit::Behavior b = bellkit::ghz_behavior(s);
                    worst_unif = std::max(worst_unif, bellkit::uniformity_spread(b));
                    const double i_tilde =
                        bellkit::evaluate_correlator_form(bellkit::to_correlators(b), c);
                    worst_val = std::max(
                        worst_val, std::abs(i_tilde - bellkit::quantum_bound_correlator(s)));
                }
        checks.push_back({"stabilizer", worst_stab <= 1e-10, worst_stab});
        checks.push_back({"uniformity", worst_unif <= 1e-10, worst_unif});
        checks.push_back({"quantum-value", worst_val <= 1e-10, worst_val});
    }

    {  // Squared-decomposition residual with the optimal observables.
        double worst_res = 0.0, worst_eig = 0.0;
        for (int n = 2; n <= 3; ++n)
            for (int m = 2; m <= 4; ++m)
                for (int d = 2; d <= 3; ++d) {
                    const bellkit::Scenario s(n, m, d);
                    const bellkit::SosReport r =
                        bellkit::sos_residual(bellkit::optimal_observables(s),
                                              bellkit::make_coefficients(s));
                    worst_res = std::max(worst_res, r.residual_max);
                    worst_eig = std::min(worst_eig, r.min_eigenvalue);
                }
        checks.push_back({"sos-residual", worst_res <= 1e-9 && worst_eig >= -1e-9, worst_res});
    }

    {  // Probability picture vs correlator picture on random behaviors.
        std::mt19937_64 rng(20260819u);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double worst = 0.0;
        for (int n = 2; n <= 3; ++n)
            for (int m = 2; m <= 3; ++m)
                for (int d = 2; d <= 4; ++d) {
                    const bellkit::Scenario s(n, m, d);
                    const bellkit::CoefficientSet c = bellkit::make_coefficients(s);
                    const double scale =
                        2.0 * static_cast<double>(bellkit::ipow(m, n - 1)) / d;
                    for (int trial = 0; trial < 10; ++trial) {
                        bellkit::Behavior b(s);
                        const std::int64_t block = bellkit::ipow(d, n);
                        for (std::int64_t x = 0; x < bellkit::ipow(m, n); ++x) {
                            double sum = 0.0;
                            for (std::int64_t i = 0; i < block; ++i) {
                                b.p[static_cast<std::size_t>(x * block + i)] = uni(rng);
                                sum += b.p[static_cast<std::size_t>(x * block + i)];
                            }
                            for (std::int64_t i = 0; i < block; ++i)
                                b.p[static_cast<std::size_t>(x * block + i)] /= sum;
                        }
                        const double i_val = bellkit::evaluate_probability_form(b, c);
                        const double i_tilde =
                            bellkit::evaluate_correlator_form(bellkit::to_correlators(b), c);
                        worst = std::max(worst, std::abs(i_val - i_tilde - scale * c.shift));
                    }
                }
        checks.push_back({"picture-mapping", worst <= 1e-10, worst});
    }

    {  // Maximal no-signaling construction.
        double worst_ns = 0.0, worst_val = 0.0;
        for (int n = 2; n <= 4; ++n)
            for (int m = 2; m <= 3; ++m)
                for (int d = 2; d <= 3; ++d) {
                    const bellkit::Scenario s(n, m, d);
                    const bellkit::CoefficientSet c = bellkit::make_coefficients(s);
                    const auto [bound, behavior] = bellkit::ns_bound_and_behavior(s, c);
                    worst_ns = std::max(worst_ns,
                                        bellkit::check_no_signaling(behavior).max_discrepancy);
                    worst_val = std::max(
                        worst_val,
                        std::abs(bellkit::evaluate_probability_form(behavior, c) - bound));
                }
        checks.push_back({"ns-construction", worst_ns <= 1e-9 && worst_val <= 1e-12,
                          std::max(worst_ns, worst_val)});
    }

    {  // Enumerated classical bounds vs the exact closed forms.
        double worst = 0.0;
        for (int m = 2; m <= 3; ++m)
            for (int d = 2; d <= 5; ++d) {
                const bellkit::Scenario s(2, m, d);
                const bellkit::BoundReport r =
                    bellkit::classical_bound_bruteforce(s, bellkit::make_coefficients(s));
                worst = std::max(worst,
                                 std::abs(r.value - bellkit::classical_bound_bipartite(m, d)));
            }
        checks.push_back({"bipartite-closed-form", worst <= 1e-10, worst});
    }

    bool all_pass = true;
    std::vector<std::string> items;
    for (const CheckResult& check : checks) {
        all_pass = all_pass && check.pass;
        items.push_back(JsonObject()
                            .field("name", jstr(check.name))
                            .field("status", jstr(check.pass ? "pass" : "fail"))
                            .field("worst", jnum(check.worst))
                            .str());
    }

    Payload payload;
    payload.params_json = JsonObject().field("perturbation", jnum(perturb)).str();
    payload.results_json = JsonObject()
                               .field("checks", jarray(items))
                               .field("status", jstr(all_pass ? "pass" : "fail"))
                               .str();
    if (!all_pass)
        throw bellkit::consistency_error("verify-all failed; report: " + payload.results_json);
    return payload;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bellkit: GHZ-tailored multipartite Bell inequalities - expressions, bounds, and certificates"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: hardware parallelism)");

    int n = 2, m = 2, d = 2;
    std::string format = "json";
    std::string kind = "all";
    std::string mode = "auto";
    bool emit_behavior = false;
    int trials = 10;
    long long seed = 20260819;
    double xi_min = 0.0, xi_max = 1.0, step = 0.1;
    int which = 1;
    double perturb = 0.0;

    CLI::App* coeffs = app.add_subcommand("coeffs", "Expression coefficients and their consistency report");
    coeffs->add_option("--N", n, "Parties")->required();
    coeffs->add_option("--m", m, "Settings per party")->required();
    coeffs->add_option("--d", d, "Outcomes per measurement")->required();

    CLI::App* bounds = app.add_subcommand("bounds", "Classical / Svetlichny / no-signaling bounds");
    bounds->add_option("--N", n, "Parties")->required();
    bounds->add_option("--m", m, "Settings per party")->required();
    bounds->add_option("--d", d, "Outcomes per measurement")->required();
    bounds->add_option("--kind", kind, "classical|svetlichny|ns|all (default all)");
    bounds->add_option("--mode", mode, "auto|enumerate|formula (default auto)");

    CLI::App* quantum = app.add_subcommand("quantum", "GHZ realization: expression values and checks");
    quantum->add_option("--N", n, "Parties")->required();
    quantum->add_option("--m", m, "Settings per party")->required();
    quantum->add_option("--d", d, "Outcomes per measurement")->required();

    CLI::App* ns = app.add_subcommand("ns", "Maximal no-signaling behavior and its verification");
    ns->add_option("--N", n, "Parties")->required();
    ns->add_option("--m", m, "Settings per party")->required();
    ns->add_option("--d", d, "Outcomes per measurement")->required();
    ns->add_flag("--emit-behavior", emit_behavior, "Include the full behavior table in the output");

    CLI::App* sos = app.add_subcommand("sos-check", "Squared-decomposition residual check");
    sos->add_option("--N", n, "Parties")->required();
    sos->add_option("--m", m, "Settings per party")->required();
    sos->add_option("--d", d, "Outcomes per measurement")->required();
    sos->add_option("--trials", trials, "Random observable sets to test (default 10)");
    sos->add_option("--seed", seed, "RNG seed");

    CLI::App* tilted = app.add_subcommand("tilted", "Single-parameter family tools");
    tilted->require_subcommand(1);
    CLI::App* scan = tilted->add_subcommand("scan", "Scan the tilt parameter range");
    scan->add_option("--N", n, "Parties (2, 3, or 4)")->required();
    scan->add_option("--xi-min", xi_min, "Scan start (must be > -1)")->required();
    scan->add_option("--xi-max", xi_max, "Scan end")->required();
    scan->add_option("--step", step, "Scan step")->required();
    scan->add_option("--format", format, "json|csv (default json)");

    CLI::App* tables = app.add_subcommand("tables", "Computed bound tables with reference deltas");
    tables->add_option("--which", which, "1 (three parties) or 2 (four parties)")->required();
    tables->add_option("--format", format, "json|csv (default json)");

    CLI::App* verify = app.add_subcommand("verify-all", "Run the cross-module invariant suite");
    verify->add_option("--perturb-coefficients", perturb,
                       "Test hook: offset the leading coefficient before checking");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        std::cerr << "run with --help for the synopsis\n";
        return 1;
    }

    if (threads > 0) omp_set_num_threads(threads);
    const int threads_used = omp_get_max_threads();

    const auto t0 = std::chrono::steady_clock::now();
    try {
        Payload payload;
        std::string command;
        if (coeffs->parsed()) {
            command = "coeffs";
            payload = run_coeffs(n, m, d);
        } else if (bounds->parsed()) {
            command = "bounds";
            payload = run_bounds(n, m, d, kind, mode);
        } else if (quantum->parsed()) {
            command = "quantum";
            payload = run_quantum(n, m, d);
        } else if (ns->parsed()) {
            command = "ns";
            payload = run_ns(n, m, d, emit_behavior);
        } else if (sos->parsed()) {
            command = "sos-check";
            payload = run_sos_check(n, m, d, trials, seed);
        } else if (tilted->parsed() && scan->parsed()) {
            command = "tilted scan";
            payload = run_tilted_scan(n, xi_min, xi_max, step, format);
        } else if (tables->parsed()) {
            command = "tables";
            payload = run_tables(which, format);
        } else if (verify->parsed()) {
            command = "verify-all";
            payload = run_verify_all(perturb);
        }

        if (!payload.csv_text.empty())
            std::cout << payload.csv_text;
        else
            std::cout << run_report(command, payload, threads_used) << "\n";

        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
        std::fprintf(stderr, "wall_time_seconds=%.3f\n", elapsed.count());
        return 0;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const bellkit::budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const bellkit::consistency_error& e) {
        std::cerr << "consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
