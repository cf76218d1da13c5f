// helpers.hpp — shared fixtures for the test programs
#pragma once

#include "qms/ceform.hpp"
#include "qms/extension.hpp"
#include "qms/fock.hpp"
#include "qms/groupalg.hpp"

namespace qms::testing {

// The two-state chain m = (1/3, 2/3), Q(1,2) = 2, Q(2,1) = 1.
inline ChainSpec chain_example() {
    ChainSpec c;
    c.m = RVector(2);
    c.m << 1.0 / 3, 2.0 / 3;
    c.q = RMatrix::Zero(2, 2);
    c.q(0, 1) = 2.0;
    c.q(1, 0) = 1.0;
    return c;
}

inline StateData diag_state(std::initializer_list<double> p) {
    RVector v(static_cast<Eigen::Index>(p.size()));
    Eigen::Index i = 0;
    for (double x : p) v(i++) = x;
    return StateData(Matrix(v.cast<cd>().asDiagonal()));
}

// Faithful state with eigenvalues drawn from [1, 6] before normalization and a
// Haar-random eigenbasis: log-spread at most ln 6.
inline StateData random_state(int n, Rng& rng) {
    std::uniform_real_distribution<double> u(1.0, 6.0);
    RVector ev(n);
    for (int i = 0; i < n; ++i) ev(i) = u(rng);
    ev /= ev.sum();
    Matrix w = haar_unitary(n, rng);
    Matrix s = w * ev.cast<cd>().asDiagonal() * w.adjoint();
    return StateData(hermitian_part(s));
}

// GNS-symmetric generator ½{Φ(1),·} − Φ with Φ a random symmetric Kraus map.
inline QMSGenerator random_dbc_generator(const StateData& s, Rng& rng, int terms = 4) {
    return generator_from_phi(random_symmetric_phi(s, rng, terms), s);
}

inline Matrix random_matrix(int n, Rng& rng) { return ginibre(n, rng); }

// L = I − D, D(x) = tr(x)/n·1 (depolarizing generator).
inline SuperOp depolarizing(int n) { return identity_map(n) - trace_map(n); }

}  // namespace qms::testing

namespace qms::testing {

// Sampling oracle for conditional negative definiteness: for random tuples
// (a_j, x_j), j = 1..k, with Σ a_j x_j = 0, the matrix Σ_{j,m} x_j* L(a_j* a_m) x_m
// must be negative semidefinite.  Returns the largest eigenvalue seen, scaled
// by max(1, ‖L‖) and the size of the tuple.
inline double cnd_sampling_oracle(const SuperOp& l, Rng& rng, int samples = 100, int k = 3) {
    const int n = l.dim();
    std::normal_distribution<double> g(0.0, 1.0);
    double worst = -1e300;
    for (int s = 0; s < samples; ++s) {
        std::vector<Matrix> a(k);
        Matrix row(n * n, static_cast<Eigen::Index>(k) * n * n);
        for (int j = 0; j < k; ++j) {
            a[j] = ginibre(n, rng);
            row.middleCols(static_cast<Eigen::Index>(j) * n * n, n * n) = kron(Matrix::Identity(n, n), a[j]);
        }
        Matrix ker = null_basis(row);
        Vector c(ker.cols());
        for (auto& v : c) v = cd(g(rng), g(rng));
        Vector xs = ker * c;
        std::vector<Matrix> x(k);
        for (int j = 0; j < k; ++j) x[j] = unvec(xs.segment(static_cast<Eigen::Index>(j) * n * n, n * n), n);
        Matrix sum = Matrix::Zero(n, n);
        double size = 0.0;
        for (int j = 0; j < k; ++j) {
            size += a[j].squaredNorm() * x[j].squaredNorm();
            for (int m = 0; m < k; ++m) sum += x[j].adjoint() * l(a[j].adjoint() * a[m]) * x[m];
        }
        double top = eig_herm(hermitian_part(sum)).values.maxCoeff() / std::max(1e-300, size);
        worst = std::max(worst, top);
    }
    return worst / std::max(1.0, l.norm());
}

}  // namespace qms::testing
