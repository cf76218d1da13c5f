// extension.cpp — extension of GNS-symmetric generators through the conditional expectation
#include "qms/extension.hpp"

#include <algorithm>
#include <cmath>

namespace qms {

double ChainSpec::reversibility_residual() const {
    double r = 0.0;
    for (int x = 0; x < size(); ++x)
        for (int y = 0; y < size(); ++y) r = std::max(r, std::abs(q(x, y) * m(x) - q(y, x) * m(y)));
    return r;
}

void ChainSpec::validate() const {
    const int n = size();
    if (n == 0) throw DimensionMismatch("chain has no states");
    if (q.rows() != n || q.cols() != n) throw DimensionMismatch("rate matrix does not match the distribution");
    if (m.minCoeff() <= 0.0) throw FaithfulnessViolated("reference distribution must have full support");
    if (std::abs(m.sum() - 1.0) > 1e-12) throw FaithfulnessViolated("reference distribution must sum to one");
    for (int x = 0; x < n; ++x) {
        if (q(x, x) != 0.0) throw NotAGenerator("rate matrix must have zero diagonal");
        for (int y = 0; y < n; ++y)
            if (q(x, y) < 0.0) throw NotAGenerator("rates must be nonnegative");
    }
    if (symmetric && reversibility_residual() > 1e-12)
        throw NotSymmetric("chain is not reversible with respect to m (residual " +
                           std::to_string(reversibility_residual()) + ")");
}

QMSGenerator chain_to_generator(const ChainSpec& c) {
    c.validate();
    const int n = c.size();
    SuperOp l = zero_map(n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (c.q(j, k) == 0.0) continue;
            l = l + (sandwich(matrix_unit(n, j, j), matrix_unit(n, j, j)) - sandwich(matrix_unit(n, j, k), matrix_unit(n, k, j))) *
                        cd(c.q(j, k));
        }
    return make_generator(l, diagonal_algebra(n), c.state());
}

SuperOp chain_extension_formula(const ChainSpec& c) {
    const int n = c.size();
    SuperOp l = zero_map(n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (c.q(j, k) == 0.0) continue;
            Matrix ejj = matrix_unit(n, j, j);
            SuperOp term = (left_mult(ejj) + right_mult(ejj)) * cd(0.5) - sandwich(matrix_unit(n, j, k), matrix_unit(n, k, j));
            l = l + term * cd(c.q(j, k));
        }
    return l;
}

Extension extend(const QMSGenerator& l, const MatAlgebra& m, const StateData& sigma_hat) {
    const int n = l.dim();
    const MatAlgebra& sub = l.algebra;
    if (m.ambient_dim() != n || sigma_hat.dim() != n) throw DimensionMismatch("extend: ambient sizes differ");
    if (!l.state) throw StateMismatch("the generator carries no reference state");
    for (const auto& e : sub.basis())
        if (m.membership_residual(e) > 1e-10) throw DimensionMismatch("the subalgebra is not contained in M");

    // The reference state of L must be the restriction of σ̂, whose density in N
    // is the trace-preserving projection of σ̂.
    Matrix sigma_n = sub.project(sigma_hat.sigma());
    double mismatch = (sigma_n - l.state->sigma()).norm();
    if (mismatch > 1e-10)
        throw StateMismatch("restriction of σ̂ to N differs from the reference state by " + std::to_string(mismatch));

    Extension ext;
    ext.expectation = conditional_expectation(m, sub, sigma_hat);
    ext.ce = ce_pipeline(l, *l.state);
    ext.k = ext.ce.k;

    SuperOp e(ext.expectation.map);
    SuperOp pm(m.basis_matrix() * m.basis_matrix().adjoint());
    Matrix p1 = ext.ce.phi(Matrix::Identity(n, n));
    SuperOp lhat = ((left_mult(ext.k) + right_mult(ext.k)) - ext.ce.phi * e) * pm;
    ext.generator = make_generator(lhat, m, sigma_hat);

    double scale = std::max(1.0, l.op.norm());
    auto& r = ext.residuals;
    r["ce_identity"] = ext.ce.ce_residual / scale;
    r["k_selfadjoint"] = (ext.k - ext.k.adjoint()).norm();
    r["k_positive"] = std::max(0.0, -min_eig_herm(hermitian_part(ext.k)));
    r["k_centralizer"] = centralizer_check(sigma_hat, ext.k);
    r["phi_one"] = (p1 - ext.k - ext.k.adjoint()).norm();
    r["gns_symmetric"] = gns_symmetric_check_on(lhat, sigma_hat, m) / scale;
    CndVerdict cnd = cnd_check(ext.generator);
    r["cnd_min_eig"] = cnd.min_eig;
    if (!cnd.cnd()) throw NotCND("extended generator failed the CND check");
    RestrictReport rr = restrict_check(ext.generator, l, ext.expectation);
    r["restrict_generator"] = rr.generator;
    r["restrict_semigroup"] = rr.semigroup;
    r["expectation_commutes"] = rr.commutes;
    return ext;
}

QMSGenerator extend_generator(const QMSGenerator& l, const MatAlgebra& m, const StateData& sigma_hat) {
    return extend(l, m, sigma_hat).generator;
}

RestrictReport restrict_check(const QMSGenerator& l_hat, const QMSGenerator& l, const CondExpectation& e,
                              const std::vector<double>& t_grid, std::uint64_t seed) {
    RestrictReport r;
    const MatAlgebra& sub = l.algebra;
    for (const auto& x : sub.basis()) r.generator = std::max(r.generator, (l_hat(x) - l(x)).norm());
    SuperOp em(e.map);
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    const MatAlgebra& big = l_hat.algebra;
    std::vector<Matrix> probes;
    for (int s = 0; s < 4; ++s) {
        Vector c(big.dim());
        for (auto& v : c) v = cd(g(rng), g(rng));
        probes.push_back(big.from_coords(c));
    }
    for (double t : t_grid) {
        SuperOp ph = semigroup(l_hat, t), p = semigroup(l, t);
        for (const auto& x : sub.basis()) r.semigroup = std::max(r.semigroup, (em(ph(x)) - p(x)).norm());
        for (const auto& x : probes) r.commutes = std::max(r.commutes, (em(ph(x)) - p(em(x))).norm() / x.norm());
    }
    return r;
}

}  // namespace qms
