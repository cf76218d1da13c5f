// types.cpp — dense linear-algebra helpers shared by every module
#include "qms/types.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace qms {

Matrix kron(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

HermEig eig_herm(const Matrix& x) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(x));
    if (es.info() != Eigen::Success) throw NumericalBreakdown("hermitian eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

double min_eig_herm(const Matrix& x) {
    if (x.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(x), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

namespace {
struct Svd {
    Matrix u, v;
    RVector s;
    Eigen::Index rank;
};

Svd svd(const Matrix& a, double rel_cut, bool full_v) {
    Eigen::BDCSVD<Matrix> sv(a, Eigen::ComputeThinU | (full_v ? Eigen::ComputeFullV : Eigen::ComputeThinV));
    Svd r{sv.matrixU(), sv.matrixV(), sv.singularValues(), 0};
    double smax = r.s.size() ? r.s(0) : 0.0;
    for (Eigen::Index i = 0; i < r.s.size(); ++i)
        if (r.s(i) > rel_cut * smax && r.s(i) > 0.0) ++r.rank;
    return r;
}
}  // namespace

Matrix range_basis(const Matrix& a, double rel_cut) {
    if (a.cols() == 0) return Matrix(a.rows(), 0);
    Svd s = svd(a, rel_cut, false);
    return s.u.leftCols(s.rank);
}

Matrix null_basis(const Matrix& a, double rel_cut) {
    if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
    Svd s = svd(a, rel_cut, true);
    return s.v.rightCols(a.cols() - s.rank);
}

Matrix pinv(const Matrix& a, double rel_cut) {
    if (a.size() == 0) return Matrix::Zero(a.cols(), a.rows());
    Svd s = svd(a, rel_cut, false);
    RVector inv = RVector::Zero(s.s.size());
    for (Eigen::Index i = 0; i < s.rank; ++i) inv(i) = 1.0 / s.s(i);
    return s.v * inv.cast<cd>().asDiagonal() * s.u.adjoint();
}

Matrix lstsq(const Matrix& a, const Matrix& b, double rel_cut) {
    return pinv(a, rel_cut) * b;
}

Matrix expm(const Matrix& m) {
    if (m.size() == 0) return m;
    Eigen::ComplexEigenSolver<Matrix> es(m);
    if (es.info() == Eigen::Success) {
        const Matrix& v = es.eigenvectors();
        Eigen::JacobiSVD<Matrix> sv(v);
        const RVector& s = sv.singularValues();
        double cond = s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1) : INFINITY;
        if (cond <= 1e8) {
            Vector d = es.eigenvalues().array().exp();
            Matrix out = v * d.asDiagonal() * v.inverse();
            if (!out.allFinite()) throw NumericalBreakdown("matrix exponential overflows the double range");
            return out;
        }
    }
    Matrix out = m.exp();
    if (!out.allFinite()) throw NumericalBreakdown("matrix exponential overflows the double range");
    return out;
}

Matrix ginibre(int n, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(2.0));
    Matrix z(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) z(i, j) = cd(g(rng), g(rng));
    return z;
}

Matrix random_hermitian(int n, Rng& rng) { return hermitian_part(ginibre(n, rng)); }

Matrix haar_unitary(int n, Rng& rng) {
    Matrix z = ginibre(n, rng);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Phase correction so that the distribution is exactly Haar.
    for (int i = 0; i < n; ++i) {
        cd d = r(i, i);
        double a = std::abs(d);
        q.col(i) *= (a > 0 ? d / a : cd(1.0));
    }
    return q;
}

}  // namespace qms
