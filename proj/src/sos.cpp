#include "bellkit/sos.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "bellkit/tolerances.hpp"

namespace bellkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_unitary(const ObservableSet& obs) {
    const Scenario& s = obs.scenario;
    if (static_cast<int>(obs.observables.size()) != s.n_parties)
        throw std::invalid_argument("observable set needs one list per party");
    for (int i = 1; i <= s.n_parties; ++i) {
        if (static_cast<int>(obs.observables[i - 1].size()) != s.n_settings)
            throw std::invalid_argument("party " + std::to_string(i) +
                                        " needs one observable per setting");
        for (int x = 1; x <= s.n_settings; ++x) {
            const Matrix& a = obs.observables[i - 1][x - 1];
            if (a.rows() != s.n_outcomes || a.cols() != s.n_outcomes)
                throw std::invalid_argument("observable for party " + std::to_string(i) +
                                            ", setting " + std::to_string(x) + " has wrong dimension");
            const double dev =
                (a.adjoint() * a - Matrix::Identity(a.rows(), a.cols())).cwiseAbs().maxCoeff();
            if (dev > tolerances().linalg)
                throw std::invalid_argument("observable for party " + std::to_string(i) +
                                            ", setting " + std::to_string(x) +
                                            " is not unitary (deviation " + std::to_string(dev) + ")");
        }
    }
}

Matrix term_matrix(const CorrelatorTerm& term) {
    Matrix out = term.party_ops[0];
    for (std::size_t i = 1; i < term.party_ops.size(); ++i)
        out = kron(out, term.party_ops[i]);
    return out;
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double quantum_bound_correlator(const Scenario& s) {
    return static_cast<double>(ipow(s.n_settings, s.n_parties - 1)) * (s.n_outcomes - 1) /
           s.n_outcomes;
}

double quantum_bound_probability(const Scenario& s, const CoefficientSet& c) {
    return quantum_bound_correlator(s) +
           2.0 * static_cast<double>(ipow(s.n_settings, s.n_parties - 1)) / s.n_outcomes * c.shift;
}

Matrix bell_operator(const ObservableSet& obs, const CoefficientSet& c) {
    require_unitary(obs);
    const Scenario& s = obs.scenario;
    const std::int64_t dim = ipow(s.n_outcomes, s.n_parties);
    Matrix b = Matrix::Zero(dim, dim);
    for (const CorrelatorTerm& term : correlator_terms(obs, c.a))
        b += term_matrix(term);
    return b / static_cast<double>(s.n_outcomes);
}

Matrix sos_t_local(const ObservableSet& obs, int alpha, int k) {
    const Scenario& s = obs.scenario;
    const int m = s.n_settings;
    const int d = s.n_outcomes;
    if (m < 3)
        throw std::invalid_argument("sos_t_local: cross terms exist only for m >= 3");
    if (alpha < 1 || alpha > m - 2)
        throw std::invalid_argument("sos_t_local: alpha must lie in 1..m-2");
    if (k < 1 || k > d - 1)
        throw std::invalid_argument("sos_t_local: k must lie in 1..d-1");

    const double c = std::cos(kPi / (2 * m));
    cplx mu, nu;
    double tau;
    if (alpha <= m - 3) {
        const double sa = std::sin(kPi * alpha / m);
        const double sa1 = std::sin(kPi * (alpha + 1) / m);
        mu = unit_phase((alpha + 1) * (d - 2.0 * k) / (2 * m), d) / (2 * c) * std::sin(kPi / m) /
             std::sqrt(sa * sa1);
        nu = -unit_phase((d - 2.0 * k) / (2 * m), d) / (2 * c) * std::sqrt(sa1 / sa);
        tau = std::sqrt(sa / sa1) / (2 * c);
    } else {
        const double big_c = std::cos(kPi / m);
        mu = -unit_phase(-(d - 2.0 * k) / (2 * m), d) / (2 * std::sqrt(2.0) * c * std::sqrt(big_c));
        nu = -unit_phase(static_cast<double>(k), d) * unit_phase((d - 2.0 * k) / (2 * m), d) /
             (2 * std::sqrt(2.0) * c * std::sqrt(big_c));
        tau = std::sqrt(big_c) / (std::sqrt(2.0) * c);
    }

    const Matrix a2 = matrix_power_cyclic(obs.observables[0][1], k, d);
    const Matrix aa2 = matrix_power_cyclic(obs.observables[0][static_cast<std::size_t>(alpha + 1)], k, d);
    // Third slot: setting α+3, cycling past m back to the first setting. The
    // boundary-branch coefficients above already carry the cyclic phase, so
    // the wrapped observable enters without an extra factor.
    const int third = (alpha + 3 <= m) ? (alpha + 3) : 1;
    const Matrix a3 = matrix_power_cyclic(obs.observables[0][static_cast<std::size_t>(third - 1)], k, d);
    return std::conj(mu) * a2 + std::conj(nu) * aa2 + tau * a3;
}

SosTerms sos_terms(const ObservableSet& obs, const CoefficientSet& c) {
    require_unitary(obs);
    const Scenario& s = obs.scenario;
    const int m = s.n_settings;
    const int d = s.n_outcomes;
    const std::int64_t dim = ipow(d, s.n_parties);

    SosTerms terms;
    terms.p_weight = 1.0 / (2 * d);
    terms.t_weight = static_cast<double>(ipow(m, s.n_parties - 2)) / (2 * d);
    for (const CorrelatorTerm& term : correlator_terms(obs, c.a))
        terms.p_terms.push_back(Matrix::Identity(dim, dim) - term_matrix(term));
    if (m >= 3) {
        const Matrix rest = Matrix::Identity(ipow(d, s.n_parties - 1), ipow(d, s.n_parties - 1));
        for (int alpha = 1; alpha <= m - 2; ++alpha)
            for (int k = 1; k <= d - 1; ++k)
                terms.t_terms.push_back(kron(sos_t_local(obs, alpha, k), rest));
    }
    return terms;
}

SosReport sos_residual(const ObservableSet& obs, const CoefficientSet& c) {
    const Scenario& s = obs.scenario;
    const int m = s.n_settings;
    const int d = s.n_outcomes;
    const std::int64_t dim = ipow(d, s.n_parties);

    const Matrix b = bell_operator(obs, c);
    const Matrix lhs = quantum_bound_correlator(s) * Matrix::Identity(dim, dim) - b;

    Matrix rhs = Matrix::Zero(dim, dim);
    for (const CorrelatorTerm& term : correlator_terms(obs, c.a)) {
        const Matrix p = Matrix::Identity(dim, dim) - term_matrix(term);
        rhs += p.adjoint() * p;
    }
    rhs /= 2.0 * d;
    if (m >= 3) {
        const std::int64_t rest_dim = ipow(d, s.n_parties - 1);
        Matrix local = Matrix::Zero(d, d);
        for (int alpha = 1; alpha <= m - 2; ++alpha)
            for (int k = 1; k <= d - 1; ++k) {
                const Matrix t = sos_t_local(obs, alpha, k);
                local += t.adjoint() * t;
            }
        rhs += (static_cast<double>(ipow(m, s.n_parties - 2)) / (2.0 * d)) *
               kron(local, Matrix::Identity(rest_dim, rest_dim));
    }

    SosReport report;
    report.residual_max = (lhs - rhs).cwiseAbs().maxCoeff();
    const Matrix herm = 0.5 * (lhs + lhs.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    report.min_eigenvalue = solver.eigenvalues().minCoeff();
    return report;
}

ObservableSet random_observables(const Scenario& s, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> root(0, s.n_outcomes - 1);
    const int d = s.n_outcomes;
    ObservableSet set{s, {}};
    set.observables.resize(static_cast<std::size_t>(s.n_parties));
    for (int i = 0; i < s.n_parties; ++i) {
        for (int x = 0; x < s.n_settings; ++x) {
            Matrix z(d, d);
            for (int r = 0; r < d; ++r)
                for (int cidx = 0; cidx < d; ++cidx)
                    z(r, cidx) = cplx(gauss(rng), gauss(rng)) / std::sqrt(2.0);
            Eigen::HouseholderQR<Matrix> qr(z);
            Matrix q = qr.householderQ();
            const Matrix r_mat = qr.matrixQR().triangularView<Eigen::Upper>();
            for (int j = 0; j < d; ++j) {
                const cplx rj = r_mat(j, j);
                const cplx phase = (std::abs(rj) > 0) ? rj / std::abs(rj) : cplx(1.0, 0.0);
                q.col(j) *= phase;
            }
            Matrix spectrum = Matrix::Zero(d, d);
            for (int j = 0; j < d; ++j)
                spectrum(j, j) = unit_phase(root(rng), d);
            set.observables[static_cast<std::size_t>(i)].push_back(q * spectrum * q.adjoint());
        }
    }
    return set;
}

ObservableSet random_observables(const Scenario& s, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_observables(s, rng);
}

}  // namespace bellkit
