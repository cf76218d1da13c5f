// superop.cpp — superoperator calculus in the column-stacking convention
#include "qms/superop.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace qms {

struct SuperOp::Cache {
    std::once_flag unital_once, herm_once, choi_once;
    double unital = 0.0, herm = 0.0, choi = 0.0;
};

namespace {

int isqrt_dim(Eigen::Index rows) {
    int n = static_cast<int>(std::lround(std::sqrt(double(rows))));
    if (static_cast<Eigen::Index>(n) * n != rows) throw DimensionMismatch("superoperator matrix must be n^2 × n^2");
    return n;
}

// vec(xᵀ) = T vec(x).
Matrix transpose_perm(int n) {
    const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
    Matrix t = Matrix::Zero(n2, n2);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t(i + j * n, j + i * n) = 1.0;
    return t;
}

}  // namespace

SuperOp::SuperOp(Matrix mat) : mat_(std::move(mat)), cache_(std::make_shared<Cache>()) {
    if (mat_.rows() != mat_.cols()) throw DimensionMismatch("superoperator matrix must be square");
    n_ = isqrt_dim(mat_.rows());
}

Matrix SuperOp::operator()(const Matrix& x) const {
    if (x.rows() != n_ || x.cols() != n_) throw DimensionMismatch("superoperator applied to a matrix of the wrong size");
    return unvec(mat_ * vec(x), n_);
}

SuperOp SuperOp::operator*(const SuperOp& o) const {
    if (o.n_ != n_) throw DimensionMismatch("composition of superoperators of different sizes");
    return SuperOp(mat_ * o.mat_);
}
SuperOp SuperOp::operator+(const SuperOp& o) const {
    if (o.n_ != n_) throw DimensionMismatch("sum of superoperators of different sizes");
    return SuperOp(mat_ + o.mat_);
}
SuperOp SuperOp::operator-(const SuperOp& o) const {
    if (o.n_ != n_) throw DimensionMismatch("difference of superoperators of different sizes");
    return SuperOp(mat_ - o.mat_);
}
SuperOp SuperOp::operator*(cd c) const { return SuperOp(mat_ * c); }

double SuperOp::unital_residual() const {
    std::call_once(cache_->unital_once, [&] {
        Matrix one = Matrix::Identity(n_, n_);
        cache_->unital = ((*this)(one) - one).norm();
    });
    return cache_->unital;
}

double SuperOp::hermiticity_residual() const {
    std::call_once(cache_->herm_once, [&] {
        Matrix t = transpose_perm(n_);
        cache_->herm = (mat_ * t - t * mat_.conjugate()).norm();
    });
    return cache_->herm;
}

double SuperOp::choi_min_eig() const {
    std::call_once(cache_->choi_once, [&] {
        Matrix c = choi(*this);
        double s = c.norm();
        cache_->choi = s > 0 ? min_eig_herm(c) / s : 0.0;
    });
    return cache_->choi;
}

SuperOp identity_map(int n) { return SuperOp(Matrix::Identity(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(n) * n)); }
SuperOp zero_map(int n) { return SuperOp(Matrix::Zero(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(n) * n)); }
SuperOp sandwich(const Matrix& a, const Matrix& b) { return SuperOp(kron(b.transpose(), a)); }
SuperOp left_mult(const Matrix& a) { return sandwich(a, Matrix::Identity(a.rows(), a.rows())); }
SuperOp right_mult(const Matrix& b) { return sandwich(Matrix::Identity(b.rows(), b.rows()), b); }
SuperOp transpose_map(int n) { return SuperOp(transpose_perm(n)); }

SuperOp trace_map(int n) {
    Vector one = vec(Matrix::Identity(n, n));
    return SuperOp(one * one.adjoint() / double(n));
}

SuperOp from_kraus(const std::vector<Matrix>& ops) {
    if (ops.empty()) throw DimensionMismatch("Kraus list must be nonempty");
    const int n = static_cast<int>(ops[0].rows());
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(n) * n);
    for (const auto& v : ops) {
        if (v.rows() != n || v.cols() != n) throw DimensionMismatch("Kraus operators must share one square size");
        m += kron(v.transpose(), v.adjoint());
    }
    return SuperOp(m);
}

SuperOp generator_from_kraus(const std::vector<Matrix>& ops) {
    SuperOp phi = from_kraus(ops);
    const int n = phi.dim();
    Matrix p1 = phi(Matrix::Identity(n, n));
    return (left_mult(p1) + right_mult(p1)) * cd(0.5) - phi;
}

SuperOp hamiltonian_jump(const Matrix& h, const std::vector<Matrix>& jumps) {
    const int n = static_cast<int>(h.rows());
    if (h.cols() != n) throw DimensionMismatch("hamiltonian must be square");
    SuperOp l = (left_mult(h) - right_mult(h)) * I_UNIT;
    for (const auto& j : jumps) {
        if (j.rows() != n || j.cols() != n) throw DimensionMismatch("jump operator size differs from hamiltonian");
        Matrix jj = j.adjoint() * j;
        l = l + sandwich(j.adjoint(), j) - (left_mult(jj) + right_mult(jj)) * cd(0.5);
    }
    return l * cd(-1.0);
}

Matrix choi(const SuperOp& s) {
    const int n = s.dim();
    const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
    Matrix c(n2, n2);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Matrix sjk = unvec(s.mat().col(j + static_cast<Eigen::Index>(k) * n), n);
            c.block(static_cast<Eigen::Index>(j) * n, static_cast<Eigen::Index>(k) * n, n, n) = sjk;
        }
    return c;
}

SuperOp gns_adjoint(const SuperOp& s, const StateData& sigma) {
    const int n = s.dim();
    if (sigma.dim() != n) throw DimensionMismatch("gns_adjoint: state size differs");
    Matrix id = Matrix::Identity(n, n);
    Matrix g = kron(sigma.sigma().transpose(), id);
    Matrix gi = kron(sigma.power(-1.0).transpose(), id);
    return SuperOp(gi * s.mat().adjoint() * g);
}

double gns_symmetric_check(const SuperOp& s, const StateData& sigma) {
    return (s.mat() - gns_adjoint(s, sigma).mat()).norm();
}

const std::vector<double>& default_t_grid() {
    static const std::vector<double> grid{-2.7, -1.0, -0.3, 0.3, 1.0, 2.7};
    return grid;
}

double modular_commutation_check(const SuperOp& s, const StateData& sigma, const std::vector<double>& t_grid) {
    double worst = 0.0;
    for (double t : t_grid) {
        const Matrix m = modular_group(sigma, t).mat();
        worst = std::max(worst, (s.mat() * m - m * s.mat()).norm());
    }
    return worst;
}

Matrix restricted_matrix(const SuperOp& s, const MatAlgebra& a) {
    if (a.ambient_dim() != s.dim()) throw DimensionMismatch("restricted_matrix: algebra size differs");
    return a.basis_matrix().adjoint() * s.mat() * a.basis_matrix();
}

double gns_symmetric_check_on(const SuperOp& s, const StateData& sigma, const MatAlgebra& a) {
    const Matrix& b = a.basis_matrix();
    Matrix sn = b.adjoint() * s.mat() * b;
    Matrix g = b.adjoint() * kron(sigma.sigma().transpose(), Matrix::Identity(s.dim(), s.dim())) * b;
    Matrix adj = g.inverse() * sn.adjoint() * g;
    return (sn - adj).norm();
}

double modular_commutation_check_on(const SuperOp& s, const StateData& sigma, const MatAlgebra& a,
                                    const std::vector<double>& t_grid) {
    const Matrix& b = a.basis_matrix();
    Matrix sn = b.adjoint() * s.mat() * b;
    double worst = 0.0;
    for (double t : t_grid) {
        Matrix r = b.adjoint() * modular_group(sigma, t).mat() * b;
        worst = std::max(worst, (sn * r - r * sn).norm());
    }
    return worst;
}

Matrix gns_l2_matrix(const SuperOp& s, const StateData& sigma) {
    const int n = s.dim();
    Matrix id = Matrix::Identity(n, n);
    return kron(sigma.power(0.5).transpose(), id) * s.mat() * kron(sigma.power(-0.5).transpose(), id);
}

Matrix kms_l2_matrix(const SuperOp& s, const StateData& sigma) {
    Matrix q = sigma.power(0.25), qi = sigma.power(-0.25);
    return kron(q.transpose(), q) * s.mat() * kron(qi.transpose(), qi);
}

void QMSGenerator::validate(double tol) const {
    double scale = std::max(1.0, op.norm());
    Matrix one = Matrix::Identity(op.dim(), op.dim());
    if (op(one).norm() > tol * scale) throw NotAGenerator("L(1) != 0");
    if (op.hermiticity_residual() > tol * scale) throw NotAGenerator("L is not hermiticity-preserving");
    if (state && state->dim() != op.dim()) throw DimensionMismatch("generator and state sizes differ");
    if (algebra.ambient_dim() != op.dim()) throw DimensionMismatch("generator and algebra sizes differ");
}

QMSGenerator make_generator(const SuperOp& op, std::optional<StateData> state) {
    return make_generator(op, full_algebra(op.dim()), std::move(state));
}

QMSGenerator make_generator(const SuperOp& op, const MatAlgebra& algebra, std::optional<StateData> state) {
    QMSGenerator g{op, algebra, std::move(state)};
    g.validate();
    return g;
}

namespace {
CndVerdict precondition_verdict(const SuperOp& l, double tol) {
    CndVerdict v;
    double scale = std::max(1.0, l.norm());
    Matrix one = Matrix::Identity(l.dim(), l.dim());
    if (l(one).norm() > tol * scale) {
        v.status = CndVerdict::Status::NotAGenerator;
        v.failing = "unital";
    } else if (l.hermiticity_residual() > tol * scale) {
        v.status = CndVerdict::Status::NotAGenerator;
        v.failing = "hermiticity_preserving";
    }
    return v;
}
}  // namespace

CndVerdict cnd_check(const SuperOp& l, double tol) {
    CndVerdict v = precondition_verdict(l, tol);
    if (!v.cnd()) return v;
    const int n = l.dim();
    const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
    Matrix c = choi(l * cd(-1.0));
    Vector w = vec(Matrix::Identity(n, n)) / std::sqrt(double(n));
    Matrix pp = Matrix::Identity(n2, n2) - w * w.adjoint();
    Matrix x = pp * c * pp;
    double scale = c.norm();
    v.min_eig = scale > 0 ? min_eig_herm(x) / scale : 0.0;
    v.status = v.min_eig >= -tol ? CndVerdict::Status::CND : CndVerdict::Status::NotCND;
    return v;
}

Matrix b_form_gram(const SuperOp& l, const MatAlgebra& a, const Matrix& rho) {
    const int d = a.dim();
    const Matrix& b = a.basis_matrix();
    const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
    Matrix g(d2, d2);
    Matrix rt = rho.transpose();
    for (int al = 0; al < d; ++al)
        for (int ga = 0; ga < d; ++ga) {
            Matrix y = l(a.basis()[al].adjoint() * a.basis()[ga]);
            Matrix r = b.adjoint() * kron(rt, y) * b;  // R_{βδ} = tr(ρ e_β* y e_δ)
            for (int be = 0; be < d; ++be)
                for (int de = 0; de < d; ++de)
                    g(static_cast<Eigen::Index>(al) * d + be, static_cast<Eigen::Index>(ga) * d + de) = -0.5 * r(be, de);
        }
    return g;
}

Matrix multiplication_kernel(const MatAlgebra& a) {
    const int d = a.dim(), n = a.ambient_dim();
    Matrix m(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(d) * d);
    for (int al = 0; al < d; ++al)
        for (int be = 0; be < d; ++be) m.col(static_cast<Eigen::Index>(al) * d + be) = vec(a.basis()[al] * a.basis()[be]);
    return null_basis(m, 1e-12);
}

CndVerdict cnd_check_on(const SuperOp& l, const MatAlgebra& a, double tol) {
    CndVerdict v = precondition_verdict(l, tol);
    if (!v.cnd()) return v;
    Matrix g = b_form_gram(l, a, Matrix::Identity(a.ambient_dim(), a.ambient_dim()));
    Matrix k = multiplication_kernel(a);
    Matrix x = k.adjoint() * g * k;
    double scale = g.norm();
    v.min_eig = (scale > 0 && x.size() > 0) ? min_eig_herm(x) / scale : 0.0;
    v.status = v.min_eig >= -tol ? CndVerdict::Status::CND : CndVerdict::Status::NotCND;
    return v;
}

CndVerdict cnd_check(const QMSGenerator& l, double tol) {
    return l.algebra.is_full() ? cnd_check(l.op, tol) : cnd_check_on(l.op, l.algebra, tol);
}

SuperOp semigroup(const SuperOp& l, double t) {
    if (t < 0) throw std::invalid_argument("semigroup: t must be nonnegative");
    return SuperOp(expm(l.mat() * cd(-t)));
}

MarkovFlags markov_check(const SuperOp& s) { return {s.choi_min_eig(), s.unital_residual()}; }

Matrix carre_du_champ(const SuperOp& l, const Matrix& x, const Matrix& y) {
    return 0.5 * (l(x).adjoint() * y + x.adjoint() * l(y) - l(x.adjoint() * y));
}

}  // namespace qms
