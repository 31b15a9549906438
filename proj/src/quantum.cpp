#include "bellkit/quantum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "bellkit/expression.hpp"
#include "bellkit/tolerances.hpp"

namespace bellkit {

namespace {

// Two eigenvalues of a d-outcome observable may approach each other only by
// sharing the same root of unity; anything within this distance of the wrong
// root is rejected.
constexpr double kEigenvalueClusterTol = 1e-8;

constexpr double kPi = 3.14159265358979323846;

}  // namespace

cplx unit_phase(double e, int d) {
    return std::polar(1.0, 2.0 * kPi * e / d);
}

Matrix fourier_matrix(int d) {
    Matrix f(d, d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            f(j, k) = unit_phase(static_cast<double>(j) * k, d) / std::sqrt(static_cast<double>(d));
    return f;
}

Matrix clock_matrix(int d) {
    Matrix om = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j)
        om(j, j) = unit_phase(j, d);
    return om;
}

double observable_phase(int party, int m, int x) {
    if (party == 1) return (x - 0.5) / m;
    if (party == 2) return static_cast<double>(x) / m;
    return (x - 1.0) / m;
}

Matrix optimal_observable(const Scenario& s, int party, int x) {
    if (party < 1 || party > s.n_parties)
        throw std::invalid_argument("optimal_observable: party index " + std::to_string(party) +
                                    " out of range 1.." + std::to_string(s.n_parties));
    if (x < 1 || x > s.n_settings)
        throw std::invalid_argument("optimal_observable: setting index " + std::to_string(x) +
                                    " out of range 1.." + std::to_string(s.n_settings));
    const int d = s.n_outcomes;
    const Matrix f = fourier_matrix(d);
    const Matrix om = clock_matrix(d);
    const double ph = observable_phase(party, s.n_settings, x);
    Matrix diag = Matrix::Zero(d, d);
    // Party 1 and the odd parties ≥ 3 conjugate F Ω F† with twist ω^{−j·ph};
    // party 2 and the even parties ≥ 4 conjugate F† Ω F with twist ω^{+j·ph}.
    const bool first_shape = (party == 1) || (party >= 3 && party % 2 == 1);
    for (int j = 0; j < d; ++j)
        diag(j, j) = unit_phase((first_shape ? -ph : ph) * j, d);
    if (first_shape)
        return diag * f * om * f.adjoint() * diag.adjoint();
    return diag * f.adjoint() * om * f * diag.adjoint();
}

ObservableSet optimal_observables(const Scenario& s) {
    ObservableSet set{s, {}};
    set.observables.resize(static_cast<std::size_t>(s.n_parties));
    for (int i = 1; i <= s.n_parties; ++i) {
        set.observables[i - 1].reserve(static_cast<std::size_t>(s.n_settings));
        for (int x = 1; x <= s.n_settings; ++x)
            set.observables[i - 1].push_back(optimal_observable(s, i, x));
    }
    return set;
}

Matrix matrix_power_cyclic(const Matrix& a, long long e, int d) {
    long long r = ((e % d) + d) % d;
    Matrix out = Matrix::Identity(a.rows(), a.cols());
    for (long long i = 0; i < r; ++i)
        out = out * a;
    return out;
}

Vector apply_local(const Matrix& op, const Vector& psi, int party, int n_parties, int d) {
    const std::int64_t dim = psi.size();
    const std::int64_t stride = ipow(d, n_parties - party);
    const std::int64_t block = stride * d;
    Vector out(dim);
    for (std::int64_t base = 0; base < dim; base += block)
        for (std::int64_t inner = 0; inner < stride; ++inner) {
            const std::int64_t off = base + inner;
            for (int q = 0; q < d; ++q) {
                cplx acc = 0.0;
                for (int r = 0; r < d; ++r)
                    acc += op(q, r) * psi[off + r * stride];
                out[off + q * stride] = acc;
            }
        }
    return out;
}

Vector ghz_state(int n_parties, int d) {
    if (n_parties < 2 || d < 2)
        throw std::invalid_argument("ghz_state: need at least 2 parties and 2 levels");
    Vector psi = Vector::Zero(ipow(d, n_parties));
    std::int64_t step = 0;
    for (int i = 0; i < n_parties; ++i)
        step = step * d + 1;
    for (int j = 0; j < d; ++j)
        psi[j * step] = 1.0 / std::sqrt(static_cast<double>(d));
    return psi;
}

Vector ghz_weighted_state(int n_parties, const std::vector<double>& weights) {
    const int d = static_cast<int>(weights.size());
    if (n_parties < 2 || d < 2)
        throw std::invalid_argument("ghz_weighted_state: need at least 2 parties and 2 weights");
    double norm2 = 0.0;
    for (double w : weights) norm2 += w * w;
    if (norm2 <= 0.0)
        throw std::invalid_argument("ghz_weighted_state: weights must not all vanish");
    Vector psi = Vector::Zero(ipow(d, n_parties));
    std::int64_t step = 0;
    for (int i = 0; i < n_parties; ++i)
        step = step * d + 1;
    for (int j = 0; j < d; ++j)
        psi[j * step] = weights[static_cast<std::size_t>(j)] / std::sqrt(norm2);
    return psi;
}

Vector ghz_tilted_state(int n_parties, double gamma) {
    if (gamma < 0.0)
        throw std::invalid_argument("ghz_tilted_state: tilt parameter must be nonnegative, got " +
                                    std::to_string(gamma));
    return ghz_weighted_state(n_parties, {1.0, gamma, 1.0});
}

namespace {

// Validates one observable and returns its d eigenprojectors, outcome q
// owning eigenvalue ω^q. For a unitary with Aᵈ = 1 the discrete Fourier sum
// over powers is exactly the spectral projector, and it groups any repeated
// eigenvalues automatically.
std::vector<Matrix> outcome_projectors(const Matrix& a, int d, int party, int x) {
    const std::string where = "observable for party " + std::to_string(party) + ", setting " +
                              std::to_string(x);
    if (a.rows() != d || a.cols() != d)
        throw std::invalid_argument(where + " must be " + std::to_string(d) + "x" + std::to_string(d));
    const double unitary_dev = (a.adjoint() * a - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (unitary_dev > tolerances().linalg)
        throw std::invalid_argument(where + " is not unitary (deviation " + std::to_string(unitary_dev) + ")");
    Eigen::ComplexEigenSolver<Matrix> solver(a, /*computeEigenvectors=*/false);
    for (int i = 0; i < d; ++i) {
        const cplx lam = solver.eigenvalues()[i];
        double best = 2.0;
        for (int q = 0; q < d; ++q)
            best = std::min(best, std::abs(lam - unit_phase(q, d)));
        if (best > kEigenvalueClusterTol)
            throw std::invalid_argument(where + " has eigenvalue off the d-th roots of unity by " +
                                        std::to_string(best));
    }
    std::vector<Matrix> projs(static_cast<std::size_t>(d));
    std::vector<Matrix> powers(static_cast<std::size_t>(d));
    powers[0] = Matrix::Identity(d, d);
    for (int k = 1; k < d; ++k)
        powers[static_cast<std::size_t>(k)] = powers[static_cast<std::size_t>(k - 1)] * a;
    for (int q = 0; q < d; ++q) {
        Matrix p = Matrix::Zero(d, d);
        for (int k = 0; k < d; ++k)
            p += unit_phase(-static_cast<double>(q) * k, d) * powers[static_cast<std::size_t>(k)];
        projs[static_cast<std::size_t>(q)] = p / static_cast<double>(d);
    }
    return projs;
}

void born_recurse(const Scenario& s, const std::vector<const std::vector<Matrix>*>& projs,
                  const Vector& psi, const Vector& current, int party, std::int64_t flat,
                  double* block) {
    if (party > s.n_parties) {
        block[flat] = std::real(psi.dot(current));
        return;
    }
    for (int q = 0; q < s.n_outcomes; ++q) {
        Vector next = apply_local((*projs[party - 1])[static_cast<std::size_t>(q)], current, party,
                                  s.n_parties, s.n_outcomes);
        born_recurse(s, projs, psi, next, party + 1, flat * s.n_outcomes + q, block);
    }
}

}  // namespace

Behavior born_behavior(const Vector& psi, const ObservableSet& obs) {
    const Scenario& s = obs.scenario;
    const int d = s.n_outcomes;
    if (psi.size() != ipow(d, s.n_parties))
        throw std::invalid_argument("born_behavior: state dimension " + std::to_string(psi.size()) +
                                    " does not match d^N = " + std::to_string(ipow(d, s.n_parties)));
    if (std::abs(psi.norm() - 1.0) > tolerances().exact)
        throw std::invalid_argument("born_behavior: state vector is not normalized (norm " +
                                    std::to_string(psi.norm()) + ")");
    if (static_cast<int>(obs.observables.size()) != s.n_parties)
        throw std::invalid_argument("born_behavior: need one observable list per party");
    // Validate every observable and precompute its outcome projectors up front.
    std::vector<std::vector<std::vector<Matrix>>> projs(static_cast<std::size_t>(s.n_parties));
    for (int i = 1; i <= s.n_parties; ++i) {
        if (static_cast<int>(obs.observables[i - 1].size()) != s.n_settings)
            throw std::invalid_argument("born_behavior: party " + std::to_string(i) +
                                        " needs one observable per setting");
        for (int x = 1; x <= s.n_settings; ++x)
            projs[i - 1].push_back(outcome_projectors(obs.observables[i - 1][x - 1], d, i, x));
    }

    Behavior b(s);
    const std::int64_t n_x = ipow(s.n_settings, s.n_parties);
    const std::int64_t block = ipow(d, s.n_parties);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t x = 0; x < n_x; ++x) {
        std::vector<int> xt = s.x_tuple(x);
        std::vector<const std::vector<Matrix>*> px(static_cast<std::size_t>(s.n_parties));
        for (int i = 1; i <= s.n_parties; ++i)
            px[i - 1] = &projs[i - 1][static_cast<std::size_t>(xt[i - 1] - 1)];
        born_recurse(s, px, psi, psi, 1, 0, b.p.data() + x * block);
    }
    return b;
}

Behavior ghz_behavior(const Scenario& s) {
    return born_behavior(ghz_state(s.n_parties, s.n_outcomes), optimal_observables(s));
}

Behavior ghz_closed_form_behavior(const Scenario& s, const std::vector<double>& weights) {
    const int d = s.n_outcomes;
    if (static_cast<int>(weights.size()) != d)
        throw std::invalid_argument("ghz_closed_form_behavior: need one weight per level");
    double norm2 = 0.0;
    for (double w : weights) norm2 += w * w;
    if (norm2 <= 0.0)
        throw std::invalid_argument("ghz_closed_form_behavior: weights must not all vanish");
    const double norm = std::sqrt(norm2);

    Behavior b(s);
    const std::int64_t n_x = ipow(s.n_settings, s.n_parties);
    const std::int64_t block = ipow(d, s.n_parties);
    const double scale = 1.0 / static_cast<double>(ipow(d, s.n_parties));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t x = 0; x < n_x; ++x) {
        std::vector<int> xt = s.x_tuple(x);
        // Alternating sum of the per-party phases.
        double phi = observable_phase(1, s.n_settings, xt[0]) - observable_phase(2, s.n_settings, xt[1]);
        for (int i = 3; i <= s.n_parties; ++i)
            phi += (i % 2 == 1 ? 1.0 : -1.0) * observable_phase(i, s.n_settings, xt[i - 1]);
        double* row = b.p.data() + x * block;
        std::vector<int> a(static_cast<std::size_t>(s.n_parties), 0);
        for (std::int64_t ai = 0;; ++ai) {
            long long dsum = 0;
            for (int i = 1; i <= s.n_parties; ++i)
                dsum += (i % 2 == 1 ? 1 : -1) * a[i - 1];
            cplx amp = 0.0;
            for (int j = 0; j < d; ++j)
                amp += (weights[static_cast<std::size_t>(j)] / norm) * unit_phase(-j * (dsum - phi), d);
            row[ai] = std::norm(amp) * scale;
            int pos = s.n_parties - 1;
            while (pos >= 0 && a[pos] == d - 1) {
                a[pos] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++a[pos];
        }
    }
    return b;
}

std::vector<CorrelatorTerm> correlator_terms(const ObservableSet& obs,
                                             const std::vector<cplx>& a_coeffs) {
    const Scenario& s = obs.scenario;
    const int m = s.n_settings;
    const int d = s.n_outcomes;
    if (static_cast<int>(a_coeffs.size()) != d - 1)
        throw std::invalid_argument("correlator_terms: need d-1 correlator coefficients");
    std::vector<CorrelatorTerm> out;
    out.reserve(static_cast<std::size_t>(ipow(m, s.n_parties - 1) * (d - 1)));
    std::vector<int> alpha(static_cast<std::size_t>(s.n_parties - 1), 1);
    while (true) {
        for (int k = 1; k <= d - 1; ++k) {
            CorrelatorTerm term;
            term.alpha = alpha;
            term.k = k;
            term.party_ops.reserve(static_cast<std::size_t>(s.n_parties));
            // Party 1: a_k·A^k of setting α₁ plus a_k*·A^k of setting α₁+1,
            // the latter picking up ω^k when the setting wraps past m.
            const int s1 = alpha[0];
            const int raw2 = alpha[0] + 1;
            const int u = raw2 > m ? 1 : 0;
            const int s2 = raw2 - u * m;
            term.party_ops.push_back(
                a_coeffs[static_cast<std::size_t>(k - 1)] *
                    matrix_power_cyclic(obs.observables[0][s1 - 1], k, d) +
                std::conj(a_coeffs[static_cast<std::size_t>(k - 1)]) * unit_phase(k * u, d) *
                    matrix_power_cyclic(obs.observables[0][s2 - 1], k, d));
            for (int i = 2; i <= s.n_parties; ++i) {
                const int a_prev = alpha[i - 2];
                const int a_next = (i == s.n_parties) ? 1 : alpha[i - 1];
                const int raw = a_prev + a_next - 1;
                const int w = raw > m ? 1 : 0;
                const int st = raw - w * m;
                const long long e = (i % 2 == 1 ? 1LL : -1LL) * k;
                const long long phase = (((e * w) % d) + d) % d;
                term.party_ops.push_back(unit_phase(static_cast<double>(phase), d) *
                                         matrix_power_cyclic(obs.observables[i - 1][st - 1], e, d));
            }
            out.push_back(std::move(term));
        }
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

double stabilizer_deviation(const Vector& psi, const ObservableSet& obs,
                            const std::vector<cplx>& a_coeffs) {
    const Scenario& s = obs.scenario;
    double worst = 0.0;
    for (const CorrelatorTerm& term : correlator_terms(obs, a_coeffs)) {
        Vector phi = psi;
        for (int i = 1; i <= s.n_parties; ++i)
            phi = apply_local(term.party_ops[i - 1], phi, i, s.n_parties, s.n_outcomes);
        worst = std::max(worst, (phi - psi).norm());
    }
    return worst;
}

double verify_stabilizer(const Scenario& s) {
    return stabilizer_deviation(ghz_state(s.n_parties, s.n_outcomes), optimal_observables(s),
                                make_coefficients(s).a);
}

double uniformity_spread(const Behavior& b) {
    const Scenario& s = b.scenario;
    const int d = s.n_outcomes;
    const std::int64_t block = ipow(d, s.n_parties);
    std::vector<std::vector<double>> dist;
    std::vector<int> a(static_cast<std::size_t>(s.n_parties), 0);
    for (const AssignmentContext& ctx : contexts(s)) {
        std::vector<double> q(static_cast<std::size_t>(d), 0.0);
        const double* p = b.p.data() + ctx.x_flat * block;
        std::fill(a.begin(), a.end(), 0);
        long long residue = ((ctx.wrap_sum % d) + d) % d;
        for (std::int64_t ai = 0;; ++ai) {
            q[static_cast<std::size_t>(residue)] += p[ai];
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
        dist.push_back(std::move(q));
    }
    double worst = 0.0;
    for (int n = 0; n < d; ++n) {
        double lo = dist[0][static_cast<std::size_t>(n)];
        double hi = lo;
        for (const auto& q : dist) {
            lo = std::min(lo, q[static_cast<std::size_t>(n)]);
            hi = std::max(hi, q[static_cast<std::size_t>(n)]);
        }
        worst = std::max(worst, hi - lo);
    }
    return worst;
}

}  // namespace bellkit
