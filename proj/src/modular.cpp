// modular.cpp — StateData validation and modular maps via the spectral decomposition of σ
#include "qms/modular.hpp"

#include <cmath>

namespace qms {

StateData::StateData(const Matrix& sigma) : sigma_(sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() == 0) throw DimensionMismatch("state must be a nonempty square matrix");
    double herm = (sigma - sigma.adjoint()).norm();
    if (herm > 1e-12 * std::max(1.0, sigma.norm())) throw FaithfulnessViolated("density matrix is not hermitian");
    if (std::abs(sigma.trace() - cd(1.0)) > 1e-12) throw FaithfulnessViolated("density matrix does not have unit trace");
    sigma_ = hermitian_part(sigma);
    HermEig e = eig_herm(sigma_);
    if (e.values(0) <= 1e-14) throw FaithfulnessViolated("density matrix is not faithful (eigenvalue below 1e-14)");
    evals_ = e.values;
    evecs_ = e.vectors;
    omega_ = power(0.5);
    Vector l = evals_.array().log().cast<cd>();
    log_ = evecs_ * l.asDiagonal() * evecs_.adjoint();
}

Matrix StateData::power(double p) const {
    Vector d = evals_.array().pow(p).cast<cd>();
    return evecs_ * d.asDiagonal() * evecs_.adjoint();
}

Matrix StateData::cpower(cd w) const {
    Vector d(evals_.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::exp(w * std::log(evals_(i)));
    return evecs_ * d.asDiagonal() * evecs_.adjoint();
}

double StateData::log_spread() const { return std::log(evals_.maxCoeff()) - std::log(evals_.minCoeff()); }

bool continuation_overflow_risk(const StateData& s, cd z) { return std::abs(z.imag()) * s.log_spread() > 700.0; }

Matrix sigma_z(const StateData& s, cd z, const Matrix& x) {
    // Work in the eigenbasis: (U* σ_z(x) U)_ab = (λ_a/λ_b)^{iz} (U* x U)_ab.
    const Matrix& u = s.eigenvectors();
    Matrix y = u.adjoint() * x * u;
    const RVector& l = s.eigenvalues();
    for (Eigen::Index a = 0; a < y.rows(); ++a)
        for (Eigen::Index b = 0; b < y.cols(); ++b) y(a, b) *= std::exp(I_UNIT * z * (std::log(l(a)) - std::log(l(b))));
    return u * y * u.adjoint();
}

SuperOp analytic_continuation(const StateData& s, cd z) {
    Matrix left = s.cpower(I_UNIT * z);
    Matrix right = s.cpower(-I_UNIT * z);
    Matrix m = kron(right.transpose(), left);
    if (!m.allFinite()) throw NumericalBreakdown("analytic continuation overflows the double range");
    return SuperOp(m);
}

SuperOp modular_group(const StateData& s, double t) { return analytic_continuation(s, cd(t, 0.0)); }

SuperOp modular_operator(const StateData& s) {
    return SuperOp(kron(s.power(-1.0).transpose(), s.sigma()));
}

cd gns_inner(const StateData& s, const Matrix& x, const Matrix& y) {
    if (x.rows() != s.dim() || y.rows() != s.dim()) throw DimensionMismatch("gns_inner: dimension mismatch");
    return (s.sigma() * x.adjoint() * y).trace();
}

cd kms_inner(const StateData& s, const Matrix& x, const Matrix& y) {
    if (x.rows() != s.dim() || y.rows() != s.dim()) throw DimensionMismatch("kms_inner: dimension mismatch");
    return (s.omega() * x.adjoint() * s.omega() * y).trace();
}

double centralizer_check(const StateData& s, const Matrix& x) {
    return (s.sigma() * x - x * s.sigma()).norm();
}

}  // namespace qms
