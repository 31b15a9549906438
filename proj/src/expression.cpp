#include "bellkit/expression.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

#include "bellkit/errors.hpp"
#include "bellkit/tolerances.hpp"

namespace bellkit {

namespace {

// Appends one party's term to a context under construction: raw setting in
// 1..2m−1 is reduced into 1..m with a wrap flag (a wrapped observable equals
// the reduced one shifted by +1 outcome).
void push_term(AssignmentContext& ctx, int m, int raw_setting, int sign) {
    int wrap = raw_setting > m ? 1 : 0;
    ctx.settings.push_back(raw_setting - wrap * m);
    ctx.signs.push_back(sign);
    ctx.wraps.push_back(wrap);
    ctx.wrap_sum += sign * wrap;
}

AssignmentContext make_context(const Scenario& s, const std::vector<int>& alpha, bool bar) {
    const int m = s.n_settings;
    AssignmentContext ctx;
    ctx.bar = bar;
    ctx.alpha = alpha;
    ctx.wrap_sum = 0;
    ctx.settings.reserve(s.n_parties);
    ctx.signs.reserve(s.n_parties);
    ctx.wraps.reserve(s.n_parties);
    // Party 1: setting α₁ (X) or α₁+1 (X̄); the X̄ branch flips every sign.
    push_term(ctx, m, alpha[0] + (bar ? 1 : 0), bar ? -1 : +1);
    // Parties j ≥ 2 use α_{j−1}+α_j−1 with α_N ≡ 1 and alternating signs.
    for (int j = 2; j <= s.n_parties; ++j) {
        int a_next = (j == s.n_parties) ? 1 : alpha[j - 1];
        int sign = (j % 2 == 0) ? -1 : +1;
        if (bar) sign = -sign;
        push_term(ctx, m, alpha[j - 2] + a_next - 1, sign);
    }
    ctx.x_flat = s.x_index(ctx.settings);
    return ctx;
}

}  // namespace

std::vector<AssignmentContext> contexts(const Scenario& s) {
    const int m = s.n_settings;
    std::vector<AssignmentContext> out;
    out.reserve(2 * static_cast<std::size_t>(ipow(m, s.n_parties - 1)));
    std::vector<int> alpha(s.n_parties - 1, 1);
    while (true) {
        out.push_back(make_context(s, alpha, false));
        out.push_back(make_context(s, alpha, true));
        // Odometer over α, last component fastest.
        int pos = s.n_parties - 2;
        while (pos >= 0 && alpha[pos] == m) {
            alpha[pos] = 1;
            --pos;
        }
        if (pos < 0) break;
        ++alpha[pos];
    }
    return out;
}

std::pair<int, int> x_values(const Scenario& s,
                             const std::vector<std::vector<int>>& assignment,
                             const std::vector<int>& alpha) {
    if (static_cast<int>(assignment.size()) != s.n_parties)
        throw std::invalid_argument("x_values: assignment must list one outcome map per party");
    for (const auto& row : assignment) {
        if (static_cast<int>(row.size()) != s.n_settings)
            throw std::invalid_argument("x_values: each outcome map needs one entry per setting");
        for (int v : row)
            if (v < 0 || v >= s.n_outcomes)
                throw std::invalid_argument("x_values: outcome out of range");
    }
    if (static_cast<int>(alpha.size()) != s.n_parties - 1)
        throw std::invalid_argument("x_values: alpha tuple must have N-1 components");
    for (int v : alpha)
        if (v < 1 || v > s.n_settings)
            throw std::invalid_argument("x_values: alpha component out of range");

    const int d = s.n_outcomes;
    int results[2];
    for (int branch = 0; branch < 2; ++branch) {
        AssignmentContext ctx = make_context(s, alpha, branch == 1);
        long long total = ctx.wrap_sum;
        for (int i = 0; i < s.n_parties; ++i)
            total += static_cast<long long>(ctx.signs[i]) * assignment[i][ctx.settings[i] - 1];
        results[branch] = static_cast<int>(((total % d) + d) % d);
    }
    return {results[0], results[1]};
}

double evaluate_residue_form(const Behavior& b, const std::vector<double>& w) {
    const Scenario& s = b.scenario;
    const int d = s.n_outcomes;
    if (static_cast<int>(w.size()) != d)
        throw std::invalid_argument("evaluate_residue_form: need one residue coefficient per outcome value");
    const std::int64_t block = ipow(d, s.n_parties);
    double total = 0.0;
    std::vector<int> a(s.n_parties, 0);
    for (const AssignmentContext& ctx : contexts(s)) {
        const double* p = b.p.data() + ctx.x_flat * block;
        std::fill(a.begin(), a.end(), 0);
        // Running signed residue tracks the odometer over outcome tuples.
        long long residue = ((ctx.wrap_sum % d) + d) % d;
        double partial = 0.0;
        for (std::int64_t ai = 0;; ++ai) {
            partial += w[static_cast<std::size_t>(residue)] * p[ai];
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
        total += partial;
    }
    return total;
}

double evaluate_probability_form(const Behavior& b, const CoefficientSet& c) {
    if (!(b.scenario == c.scenario))
        throw std::invalid_argument("evaluate_probability_form: behavior and coefficients disagree on the scenario");
    return evaluate_residue_form(b, c.alpha_hat);
}

double evaluate_correlator_form(const CorrelatorTensor& t, const CoefficientSet& c) {
    const Scenario& s = t.scenario;
    if (!(s == c.scenario))
        throw std::invalid_argument("evaluate_correlator_form: tensor and coefficients disagree on the scenario");
    const int d = s.n_outcomes;
    const std::int64_t block = ipow(d, s.n_parties);
    const double two_pi = 2.0 * std::acos(-1.0);
    std::vector<cplx> omega(d);
    for (int r = 0; r < d; ++r)
        omega[r] = std::polar(1.0, two_pi * r / d);

    cplx total = 0.0;
    for (const AssignmentContext& ctx : contexts(s)) {
        const cplx* row = t.t.data() + ctx.x_flat * block;
        cplx partial = 0.0;
        for (int k = 1; k <= d - 1; ++k) {
            std::int64_t k_flat = 0;
            for (int i = 0; i < s.n_parties; ++i) {
                long long ki = (static_cast<long long>(k) * ctx.signs[i]) % d;
                k_flat = k_flat * d + ((ki + d) % d);
            }
            int wk = static_cast<int>((((static_cast<long long>(k) * ctx.wrap_sum) % d) + d) % d);
            partial += c.a[k - 1] * omega[wk] * row[k_flat];
        }
        total += partial;
    }
    total /= static_cast<double>(d);
    if (std::abs(total.imag()) > tolerances().linalg)
        throw consistency_error("correlator form evaluated to a non-real value (imaginary part " +
                                std::to_string(total.imag()) + ")");
    return total.real();
}

BellFunctional functional_table_from_residues(const Scenario& s, const std::vector<double>& w) {
    const int d = s.n_outcomes;
    if (static_cast<int>(w.size()) != d)
        throw std::invalid_argument("functional_table_from_residues: need one residue coefficient per outcome value");
    BellFunctional f{s, std::vector<double>(static_cast<std::size_t>(s.table_size()), 0.0), w};
    const std::int64_t block = ipow(d, s.n_parties);
    std::vector<int> a(s.n_parties, 0);
    for (const AssignmentContext& ctx : contexts(s)) {
        double* row = f.table.data() + ctx.x_flat * block;
        std::fill(a.begin(), a.end(), 0);
        long long residue = ((ctx.wrap_sum % d) + d) % d;
        for (std::int64_t ai = 0;; ++ai) {
            row[ai] += w[static_cast<std::size_t>(residue)];
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
    return f;
}

BellFunctional functional_table(const CoefficientSet& c) {
    return functional_table_from_residues(c.scenario, c.alpha_hat);
}

double evaluate_table(const BellFunctional& f, const Behavior& b) {
    if (!(f.scenario == b.scenario))
        throw std::invalid_argument("evaluate_table: functional and behavior disagree on the scenario");
    const Scenario& s = f.scenario;
    const std::int64_t block = ipow(s.n_outcomes, s.n_parties);
    double total = 0.0;
    for (std::int64_t x = 0; x < ipow(s.n_settings, s.n_parties); ++x) {
        const double* trow = f.table.data() + x * block;
        const double* prow = b.p.data() + x * block;
        double partial = 0.0;
        for (std::int64_t ai = 0; ai < block; ++ai)
            partial += trow[ai] * prow[ai];
        total += partial;
    }
    return total;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string functional_to_json_text(const BellFunctional& f) {
    const Scenario& s = f.scenario;
    const std::int64_t block = ipow(s.n_outcomes, s.n_parties);
    std::string out = "{\"N\":" + std::to_string(s.n_parties) +
                      ",\"m\":" + std::to_string(s.n_settings) +
                      ",\"d\":" + std::to_string(s.n_outcomes) + ",\"entries\":[";
    bool first = true;
    for (std::int64_t x = 0; x < ipow(s.n_settings, s.n_parties); ++x) {
        std::vector<int> xt = s.x_tuple(x);
        for (std::int64_t ai = 0; ai < block; ++ai) {
            double v = f.table[static_cast<std::size_t>(x * block + ai)];
            if (v == 0.0) continue;
            std::vector<int> at = s.a_tuple(ai);
            if (!first) out += ',';
            first = false;
            out += "{\"x\":[";
            for (int i = 0; i < s.n_parties; ++i) {
                if (i) out += ',';
                out += std::to_string(xt[i]);
            }
            out += "],\"a\":[";
            for (int i = 0; i < s.n_parties; ++i) {
                if (i) out += ',';
                out += std::to_string(at[i]);
            }
            out += "],\"t\":" + format_double(v) + '}';
        }
    }
    out += "]}";
    return out;
}

}  // namespace bellkit
