// test_superop.cpp — Choi matrices, GNS adjoints, CND verdicts, semigroups, carré du champ
#include <doctest.h>

#include "helpers.hpp"

#include <cmath>

using namespace qms;
using namespace qms::testing;

TEST_CASE("vectorization convention") {
    Matrix x(2, 2);
    x << 1.0, 2.0, 3.0, 4.0;
    Vector v = vec(x);
    CHECK(v(1) == cd(3.0));
    CHECK(v(2) == cd(2.0));
    SuperOp l = left_mult(matrix_unit(2, 0, 1));
    Matrix expected(2, 2);
    expected << 3.0, 4.0, 0.0, 0.0;
    CHECK((l(x) - expected).norm() == doctest::Approx(0.0));
    Rng rng(3);
    Matrix a = random_matrix(3, rng), b = random_matrix(3, rng), y = random_matrix(3, rng);
    CHECK((sandwich(a, b)(y) - a * y * b).norm() <= 1e-12);
}

TEST_CASE("Choi matrices of standard maps") {
    const int n = 3;
    Matrix c = choi(identity_map(n));
    HermEig e = eig_herm(c);
    CHECK(e.values.maxCoeff() == doctest::Approx(n));
    CHECK(range_basis(c).cols() == 1);

    // Transpose: Choi is the swap, eigenvalues ±1.
    Matrix ct = choi(transpose_map(n));
    HermEig et = eig_herm(ct);
    CHECK(et.values.minCoeff() == doctest::Approx(-1.0));
    CHECK(et.values.maxCoeff() == doctest::Approx(1.0));
    CHECK_FALSE(transpose_map(n).is_cp());

    // Trace map x ↦ tr(x)/n·1: Choi = 1/n.
    CHECK((choi(trace_map(n)) - Matrix::Identity(n * n, n * n) / double(n)).norm() <= 1e-12);
    CHECK(trace_map(n).is_cp());

    Rng rng(4);
    std::vector<Matrix> ops{random_matrix(n, rng), random_matrix(n, rng)};
    CHECK(from_kraus(ops).is_cp());
    CHECK(from_kraus(ops).choi_min_eig() >= -1e-12);
}

TEST_CASE("GNS adjoint") {
    StateData s = diag_state({1.0 / 3, 2.0 / 3});
    SuperOp m = sandwich(matrix_unit(2, 0, 1), matrix_unit(2, 1, 0));  // x ↦ E12 x E21
    SuperOp adj = gns_adjoint(m, s);
    // Check the defining relation on all 16 pairs of matrix units.
    double worst = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            Matrix x = matrix_unit(2, a / 2, a % 2), y = matrix_unit(2, b / 2, b % 2);
            worst = std::max(worst, std::abs(gns_inner(s, m(x), y) - gns_inner(s, x, adj(y))));
        }
    CHECK(worst <= 1e-14);

    Rng rng(12);
    StateData r = random_state(3, rng);
    SuperOp g(random_matrix(9, rng));
    CHECK((gns_adjoint(gns_adjoint(g, r), r).mat() - g.mat()).norm() <= 1e-10 * g.norm());
}

TEST_CASE("chain generators: symmetry and modular commutation") {
    ChainSpec c = chain_example();
    QMSGenerator l = chain_to_generator(c);
    CHECK(gns_symmetric_check_on(l.op, c.state(), l.algebra) <= 1e-10);
    CHECK(modular_commutation_check_on(l.op, c.state(), l.algebra) <= 1e-10);

    ChainSpec skew;
    skew.m = RVector::Constant(3, 1.0 / 3);
    skew.q = RMatrix::Zero(3, 3);
    skew.q(0, 1) = skew.q(1, 2) = skew.q(2, 0) = 1.0;  // a rotation: not reversible
    skew.symmetric = false;
    QMSGenerator ls = chain_to_generator(skew);
    CHECK(gns_symmetric_check_on(ls.op, skew.state(), ls.algebra) > 0.1);
    skew.symmetric = true;
    CHECK_THROWS_AS(skew.validate(), NotSymmetric);
}

TEST_CASE("CND verdicts on simple generators") {
    const int n = 3;
    CHECK(cnd_check(depolarizing(n)).cnd());
    CHECK(cnd_check(zero_map(n)).cnd());
    CndVerdict bad = cnd_check(zero_map(n) - depolarizing(n));
    CHECK_FALSE(bad.cnd());
    CHECK(bad.min_eig < 0.0);
    // Not unital: reported as a failed precondition, not as a CND verdict.
    CHECK(cnd_check(identity_map(n)).status == CndVerdict::Status::NotAGenerator);

    Rng rng(5);
    StateData s = random_state(3, rng);
    QMSGenerator l = random_dbc_generator(s, rng);
    CHECK(cnd_check(l).cnd());
    CHECK(cnd_sampling_oracle(l.op, rng, 30) <= 1e-9);
    CHECK(cnd_sampling_oracle(zero_map(n) - depolarizing(n), rng, 30) > 1e-6);
}

TEST_CASE("CND on a subalgebra") {
    ChainSpec c = chain_example();
    QMSGenerator l = chain_to_generator(c);
    CHECK(cnd_check(l).cnd());
    CHECK(cnd_check_on(l.op * cd(-1.0), l.algebra).status == CndVerdict::Status::NotCND);
}

TEST_CASE("semigroups") {
    const int n = 3;
    SuperOp l = depolarizing(n);
    CHECK((semigroup(l, 0.0).mat() - Matrix::Identity(9, 9)).norm() <= 1e-12);
    // exp(−t(I − D)) = e^{−t} I + (1 − e^{−t}) D.
    const double t = 0.7;
    Matrix expected = std::exp(-t) * identity_map(n).mat() + (1.0 - std::exp(-t)) * trace_map(n).mat();
    CHECK((semigroup(l, t).mat() - expected).norm() <= 1e-12);

    Rng rng(6);
    StateData s = random_state(3, rng);
    QMSGenerator g = random_dbc_generator(s, rng);
    SuperOp ab = semigroup(g, 0.4) * semigroup(g, 0.9);
    CHECK((ab.mat() - semigroup(g, 1.3).mat()).norm() <= 1e-10 * ab.norm());
    MarkovFlags f = markov_check(semigroup(g, 0.5));
    CHECK(f.markov());

    // Contraction in the GNS norm.
    for (int k = 0; k < 5; ++k) {
        Matrix x = random_matrix(3, rng);
        Matrix y = semigroup(g, 0.3)(x);
        CHECK(gns_inner(s, y, y).real() <= gns_inner(s, x, x).real() + 1e-12);
    }
}

TEST_CASE("carré du champ") {
    Rng rng(7);
    StateData s = random_state(2, rng);
    QMSGenerator g = random_dbc_generator(s, rng);
    Matrix one = Matrix::Identity(2, 2);
    CHECK(carre_du_champ(g, one, one).norm() <= 1e-12);
    Matrix x = random_matrix(2, rng);
    CHECK(eig_herm(hermitian_part(carre_du_champ(g, x, x))).values.minCoeff() >= -1e-10);

    // Classical oracle Γ(f,f)(x) = ½ Σ_y Q(x,y)(f(x) − f(y))².
    ChainSpec c = chain_example();
    QMSGenerator l = chain_to_generator(c);
    RVector f(2);
    f << 1.0, 0.0;
    Matrix gamma = carre_du_champ(l, f.cast<cd>().asDiagonal(), f.cast<cd>().asDiagonal());
    Matrix expected = Matrix::Zero(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) expected(a, a) += 0.5 * c.q(a, b) * std::pow(f(a) - f(b), 2);
    CHECK((gamma - expected).norm() <= 1e-12);
    CHECK(gamma(0, 0).real() == doctest::Approx(1.0));
    CHECK(gamma(1, 1).real() == doctest::Approx(0.5));

    // Group algebras: Γ(λ_g, λ_g) = ℓ(g)·1.
    GroupSpec z3 = cyclic_group(3);
    QMSGenerator lg = group_generator(z3);
    for (int e = 0; e < 3; ++e) {
        Matrix lam = left_regular(z3, e);
        CHECK((carre_du_champ(lg, lam, lam) - z3.ell(e) * Matrix::Identity(3, 3)).norm() <= 1e-12);
    }
}

TEST_CASE("GNS and KMS pictures coincide for symmetric maps") {
    Rng rng(8);
    for (int k = 0; k < 3; ++k) {
        StateData s = random_state(3, rng);
        QMSGenerator g = random_dbc_generator(s, rng);
        CHECK(modular_commutation_check(g.op, s) <= 1e-9 * std::max(1.0, g.op.norm()));
        CHECK((gns_l2_matrix(g.op, s) - kms_l2_matrix(g.op, s)).norm() <= 1e-9 * std::max(1.0, g.op.norm()));
    }
}
