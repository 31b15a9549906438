#include "bellkit/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bellkit/tolerances.hpp"

namespace bellkit {

Tolerances& tolerances() {
    static Tolerances t;
    return t;
}

std::int64_t ipow(std::int64_t base, int exp) {
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

Scenario::Scenario(int N, int m, int d) : n_parties(N), n_settings(m), n_outcomes(d) {
    if (N < 2) throw std::invalid_argument("scenario: need at least 2 parties, got " + std::to_string(N));
    if (m < 2) throw std::invalid_argument("scenario: need at least 2 settings, got " + std::to_string(m));
    if (d < 2) throw std::invalid_argument("scenario: need at least 2 outcomes, got " + std::to_string(d));
}

std::int64_t Scenario::x_index(const std::vector<int>& x) const {
    std::int64_t r = 0;
    for (int xi : x) {
        if (xi < 1 || xi > n_settings)
            throw std::invalid_argument("setting index " + std::to_string(xi) + " outside 1.." +
                                        std::to_string(n_settings));
        r = r * n_settings + (xi - 1);
    }
    return r;
}

std::int64_t Scenario::a_index(const std::vector<int>& a) const {
    std::int64_t r = 0;
    for (int ai : a) {
        if (ai < 0 || ai >= n_outcomes)
            throw std::invalid_argument("outcome index " + std::to_string(ai) + " outside 0.." +
                                        std::to_string(n_outcomes - 1));
        r = r * n_outcomes + ai;
    }
    return r;
}

std::vector<int> Scenario::x_tuple(std::int64_t xi) const {
    std::vector<int> x(n_parties);
    for (int i = n_parties - 1; i >= 0; --i) {
        x[i] = static_cast<int>(xi % n_settings) + 1;
        xi /= n_settings;
    }
    return x;
}

std::vector<int> Scenario::a_tuple(std::int64_t ai) const {
    std::vector<int> a(n_parties);
    for (int i = n_parties - 1; i >= 0; --i) {
        a[i] = static_cast<int>(ai % n_outcomes);
        ai /= n_outcomes;
    }
    return a;
}

void Behavior::validate() const {
    const double tol_entry = tolerances().exact;
    const double tol_norm = tolerances().linalg;
    const std::int64_t na = scenario.outcome_tuples();
    for (std::int64_t xi = 0; xi < scenario.setting_tuples(); ++xi) {
        double sum = 0.0;
        for (std::int64_t ai = 0; ai < na; ++ai) {
            const double v = at(xi, ai);
            if (v < -tol_entry || v > 1.0 + tol_entry)
                throw std::invalid_argument("behavior entry out of [0,1] at x-index " +
                                            std::to_string(xi) + ", a-index " + std::to_string(ai) +
                                            ": " + std::to_string(v));
            sum += v;
        }
        if (std::abs(sum - 1.0) > tol_norm)
            throw std::invalid_argument("behavior unnormalized at x-index " + std::to_string(xi) +
                                        ": sum = " + std::to_string(sum));
    }
}

namespace {

/// d-th roots of unity ω^0..ω^{d−1}.
std::vector<cplx> unit_roots(int d) {
    std::vector<cplx> w(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        const double ph = 2.0 * std::numbers::pi * j / d;
        w[static_cast<std::size_t>(j)] = {std::cos(ph), std::sin(ph)};
    }
    return w;
}

/// a·k mod d for two flat tuple indices.
int dot_mod(const Scenario& s, std::int64_t ai, std::int64_t ki) {
    int r = 0;
    const int d = s.n_outcomes;
    for (int i = 0; i < s.n_parties; ++i) {
        r += static_cast<int>(ai % d) * static_cast<int>(ki % d);
        ai /= d;
        ki /= d;
    }
    return r % d;
}

}  // namespace

CorrelatorTensor to_correlators(const Behavior& b) {
    b.validate();
    const Scenario& s = b.scenario;
    const auto w = unit_roots(s.n_outcomes);
    CorrelatorTensor c(s);
    const std::int64_t na = s.outcome_tuples();
    for (std::int64_t xi = 0; xi < s.setting_tuples(); ++xi)
        for (std::int64_t ki = 0; ki < na; ++ki) {
            cplx acc{0.0, 0.0};
            for (std::int64_t ai = 0; ai < na; ++ai)
                acc += w[static_cast<std::size_t>(dot_mod(s, ai, ki))] * b.at(xi, ai);
            c.at(xi, ki) = acc;
        }
    return c;
}

Behavior to_behavior(const CorrelatorTensor& c) {
    const Scenario& s = c.scenario;
    const auto w = unit_roots(s.n_outcomes);
    Behavior b(s);
    const std::int64_t na = s.outcome_tuples();
    const double inv = 1.0 / static_cast<double>(na);
    for (std::int64_t xi = 0; xi < s.setting_tuples(); ++xi)
        for (std::int64_t ai = 0; ai < na; ++ai) {
            cplx acc{0.0, 0.0};
            for (std::int64_t ki = 0; ki < na; ++ki) {
                const int e = dot_mod(s, ai, ki);
                acc += std::conj(w[static_cast<std::size_t>(e)]) * c.at(xi, ki);
            }
            double v = acc.real() * inv;
            if (v < -1e-9)
                throw std::runtime_error("not a behavior: reconstructed probability " +
                                         std::to_string(v) + " at x-index " + std::to_string(xi) +
                                         ", a-index " + std::to_string(ai));
            b.at(xi, ai) = v < 0.0 ? 0.0 : v;
        }
    return b;
}

NoSignalingReport check_no_signaling(const Behavior& b) {
    const Scenario& s = b.scenario;
    const int N = s.n_parties, m = s.n_settings, d = s.n_outcomes;
    const std::int64_t nx_rest = ipow(m, N - 1);
    const std::int64_t na_rest = ipow(d, N - 1);
    NoSignalingReport report;

    for (int party = 1; party <= N; ++party) {
        const int pi = party - 1;  // 0-based position
        // strides for inserting party pi's index into flat tuples
        const std::int64_t x_hi = ipow(m, N - 1 - pi), a_hi = ipow(d, N - 1 - pi);
        for (std::int64_t xr = 0; xr < nx_rest; ++xr) {
            const std::int64_t x_pre = xr / x_hi, x_post = xr % x_hi;
            for (std::int64_t ar = 0; ar < na_rest; ++ar) {
                const std::int64_t a_pre = ar / a_hi, a_post = ar % a_hi;
                double lo = 0.0, hi = 0.0;
                for (int xs = 0; xs < m; ++xs) {
                    const std::int64_t xi = (x_pre * m + xs) * x_hi + x_post;
                    double marg = 0.0;
                    for (int as = 0; as < d; ++as)
                        marg += b.at(xi, (a_pre * d + as) * a_hi + a_post);
                    if (xs == 0) { lo = hi = marg; }
                    else { lo = std::min(lo, marg); hi = std::max(hi, marg); }
                }
                const double spread = hi - lo;
                report.max_discrepancy = std::max(report.max_discrepancy, spread);
                if (spread > tolerances().marginal)
                    report.violations.push_back({party, xr * na_rest + ar, spread});
            }
        }
    }
    return report;
}

Behavior behavior_from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Scenario s(j.at("N").get<int>(), j.at("m").get<int>(), j.at("d").get<int>());
    const auto& arr = j.at("p");
    if (!arr.is_array() || static_cast<std::int64_t>(arr.size()) != s.table_size())
        throw std::invalid_argument("behavior file: field 'p' must have length (m*d)^N = " +
                                    std::to_string(s.table_size()));
    Behavior b(s);
    for (std::size_t i = 0; i < arr.size(); ++i) b.p[i] = arr[i].get<double>();
    b.validate();
    return b;
}

Behavior load_behavior(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open behavior file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return behavior_from_json_text(ss.str());
}

std::string behavior_to_json_text(const Behavior& b) {
    nlohmann::json j;
    j["N"] = b.scenario.n_parties;
    j["m"] = b.scenario.n_settings;
    j["d"] = b.scenario.n_outcomes;
    j["p"] = b.p;
    return j.dump();
}

}  // namespace bellkit
