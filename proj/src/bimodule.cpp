// bimodule.cpp — GNS bimodule construction, M-valued inner products and the invariant implementing vector
#include "qms/bimodule.hpp"

#include <algorithm>
#include <cmath>

namespace qms {

namespace {

Matrix herm_exp_i(const Matrix& a, double t) {
    if (a.size() == 0) return a;
    HermEig e = eig_herm(a);
    Vector d(e.values.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::exp(I_UNIT * t * e.values(i));
    return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

Vector unit(int d, int a) {
    Vector v = Vector::Zero(d);
    v(a) = 1.0;
    return v;
}

Vector kron_vec(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Matrix combine(const MatAlgebra& m, const std::vector<Matrix>& per_basis, const Matrix& x, int dim) {
    Vector c = m.coords(x);
    Matrix out = Matrix::Zero(dim, dim);
    for (Eigen::Index g = 0; g < c.size(); ++g)
        if (c(g) != cd(0.0)) out += c(g) * per_basis[static_cast<size_t>(g)];
    return out;
}

}  // namespace

Matrix coord_left(const MatAlgebra& m, const Matrix& x) {
    const Matrix& b = m.basis_matrix();
    return b.adjoint() * kron(Matrix::Identity(m.ambient_dim(), m.ambient_dim()), x) * b;
}

Matrix coord_right(const MatAlgebra& m, const Matrix& y) {
    const Matrix& b = m.basis_matrix();
    return b.adjoint() * kron(y.transpose(), Matrix::Identity(m.ambient_dim(), m.ambient_dim())) * b;
}

Matrix Correspondence::left_of(const Matrix& x) const { return combine(algebra, left, x, dim); }
Matrix Correspondence::right_of(const Matrix& y) const { return combine(algebra, right, y, dim); }

Matrix Correspondence::left_bounded(const Vector& xi) const {
    const int d = algebra.dim();
    Matrix out(dim, d);
    Matrix si = state.power(-0.5);
    for (int a = 0; a < d; ++a) out.col(a) = right_of(si * algebra.basis()[a]) * xi;
    return out;
}

Matrix Correspondence::inner(const Vector& xi, const Vector& zeta) const {
    Matrix op = left_bounded(xi).adjoint() * left_bounded(zeta);
    Vector w = op * algebra.coords(state.omega());
    return algebra.from_coords(w) * state.power(-0.5);
}

Correspondence l2_correspondence(const MatAlgebra& m, const StateData& sigma) {
    Correspondence c;
    c.algebra = m;
    c.state = sigma;
    c.dim = m.dim();
    for (const auto& e : m.basis()) {
        c.left.push_back(coord_left(m, e));
        c.right.push_back(coord_right(m, e));
    }
    return c;
}

Matrix BimoduleRep::module_right_of(const Matrix& x) const { return combine(algebra, module_right, x, dim); }

Vector BimoduleRep::delta_of(const Matrix& x) const {
    Vector c = algebra.coords(x);
    Vector out = Vector::Zero(dim);
    for (Eigen::Index g = 0; g < c.size(); ++g) out += c(g) * delta_vecs[static_cast<size_t>(g)];
    return out;
}

Matrix BimoduleRep::ut(double t) const { return herm_exp_i(ut_gen, t); }

double BimoduleRep::implementation_residual(const Vector& xi, cd factor) const {
    double s = 0.0;
    for (int b = 0; b < algebra.dim(); ++b) {
        Vector r = factor * ((left[b] - module_right[b]) * xi) - delta_vecs[b];
        s += r.squaredNorm();
    }
    return std::sqrt(s);
}

double BimoduleRep::delta_norm() const {
    double s = 0.0;
    for (const auto& v : delta_vecs) s += v.squaredNorm();
    return std::sqrt(s);
}

BimoduleRep build_gns_bimodule(const MatAlgebra& m, const QMSGenerator& l, const StateData& sigma, double sym_tol) {
    const int n = m.ambient_dim();
    if (l.dim() != n || sigma.dim() != n) throw DimensionMismatch("build_gns_bimodule: sizes of algebra, generator and state differ");
    if (m.membership_residual(sigma.sigma()) > 1e-10)
        throw StateMismatch("the state density must lie in the algebra (pass the restricted state)");
    double lscale = std::max(1.0, restricted_matrix(l.op, m).norm());
    double sym = gns_symmetric_check_on(l.op, sigma, m);
    if (sym > sym_tol * lscale)
        throw NotSymmetric("generator is not GNS-symmetric (residual " + std::to_string(sym) + ")");
    CndVerdict v = cnd_check_on(l.op, m);
    if (v.status == CndVerdict::Status::NotAGenerator) throw NotAGenerator("failing flag: " + v.failing);
    if (!v.cnd()) throw NotCND("form is not positive on the constraint subspace (min eigenvalue " + std::to_string(v.min_eig) + ")");

    BimoduleRep rep;
    rep.algebra = m;
    rep.state = sigma;
    const int d = m.dim();
    const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;

    rep.raw_gram = b_form_gram(l.op, m, sigma.sigma());
    rep.kernel = multiplication_kernel(m);
    Matrix gk = hermitian_part(rep.kernel.adjoint() * rep.raw_gram * rep.kernel);
    HermEig eg = eig_herm(gk);
    rep.gram_spectrum = eg.values;
    double lmax = eg.values.size() ? eg.values.maxCoeff() : 0.0;
    double cut = 1e-11 * lmax;
    std::vector<int> keep;
    for (Eigen::Index i = 0; i < eg.values.size(); ++i) {
        if (lmax > 0 && eg.values(i) > cut) keep.push_back(static_cast<int>(i));
        if (lmax > 0 && eg.values(i) > cut / 100 && eg.values(i) < cut * 100) ++rep.borderline;
    }
    rep.dim = static_cast<int>(keep.size());
    Matrix wp(gk.rows(), rep.dim);
    RVector lp(rep.dim);
    for (int k = 0; k < rep.dim; ++k) {
        wp.col(k) = eg.vectors.col(keep[k]);
        lp(k) = eg.values(keep[k]);
    }
    Vector sq = lp.array().sqrt().cast<cd>();
    Vector isq = lp.array().sqrt().inverse().cast<cd>();
    rep.embed = sq.asDiagonal() * wp.adjoint() * rep.kernel.adjoint();
    rep.lift = rep.kernel * wp * isq.asDiagonal();

    Matrix id_d = Matrix::Identity(d, d);
    for (const auto& e : m.basis()) {
        rep.left.push_back(rep.embed * kron(coord_left(m, e), id_d) * rep.lift);
        rep.module_right.push_back(rep.embed * kron(id_d, coord_right(m, e)) * rep.lift);
    }
    Matrix sh = sigma.omega(), shi = sigma.power(-0.5);
    for (const auto& e : m.basis()) rep.right.push_back(rep.module_right_of(sh * e * shi));

    Vector c1 = m.coords(Matrix::Identity(n, n));
    for (int a = 0; a < d; ++a)
        rep.delta_vecs.push_back(rep.embed * (kron_vec(unit(d, a), c1) - kron_vec(c1, unit(d, a))));

    Matrix dgen = coord_left(m, sigma.log_sigma()) - coord_right(m, sigma.log_sigma());
    rep.ut_gen = hermitian_part(rep.embed * (kron(dgen, id_d) + kron(id_d, dgen)) * rep.lift);

    // 𝒥(a⊗x⊗Ω) = −τ(x)⊗τ(a)⊗Ω with τ(z) = σ^{1/2} z* σ^{-1/2}, extended antilinearly.
    Matrix tmat(d, d);
    for (int b = 0; b < d; ++b) tmat.col(b) = m.coords(sh * m.basis()[b].adjoint() * shi);
    Matrix jr(d2, d2);
    for (int g = 0; g < d; ++g)
        for (int de = 0; de < d; ++de)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    jr(static_cast<Eigen::Index>(g) * d + de, static_cast<Eigen::Index>(a) * d + b) = -tmat(g, b) * tmat(de, a);
    rep.jj = rep.embed * jr * rep.lift.conjugate();
    return rep;
}

Matrix mvalued_inner(const BimoduleRep& rep, const Vector& xi, const Vector& zeta) { return rep.inner(xi, zeta); }

Matrix mvalued_inner_raw(const BimoduleRep& rep, const SuperOp& l, const Vector& xi, const Vector& zeta) {
    const MatAlgebra& m = rep.algebra;
    const int d = m.dim(), n = m.ambient_dim();
    Vector c = rep.lift * xi, cp = rep.lift * zeta;
    std::vector<Matrix> p(d, Matrix::Zero(n, n)), q(d, Matrix::Zero(n, n));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            p[a] += c(static_cast<Eigen::Index>(a) * d + b) * m.basis()[b];
            q[a] += cp(static_cast<Eigen::Index>(a) * d + b) * m.basis()[b];
        }
    Matrix out = Matrix::Zero(n, n);
    for (int a = 0; a < d; ++a)
        for (int g = 0; g < d; ++g) out += p[a].adjoint() * l(m.basis()[a].adjoint() * m.basis()[g]) * q[g];
    return -0.5 * out;
}

std::string stage_name(XiVector::Stage s) {
    switch (s) {
        case XiVector::Stage::Raw: return "raw";
        case XiVector::Stage::VtInvariant: return "vt_invariant";
        case XiVector::Stage::FullyInvariant: return "fully_invariant";
    }
    return "unknown";
}

namespace {
double ut_invariance(const BimoduleRep& rep, const Vector& v) {
    double worst = 0.0;
    for (double t : {0.1, 1.0, 10.0}) worst = std::max(worst, (rep.ut(t) * v - v).norm());
    return worst;
}
}  // namespace

XiVector solve_inner_vector(const BimoduleRep& rep) {
    const int d = rep.algebra.dim(), h = rep.dim;
    XiVector out;
    if (h == 0) {
        out.vec = Vector::Zero(0);
        out.residuals["delta_implementation"] = 0.0;
        return out;
    }
    Matrix a(static_cast<Eigen::Index>(d) * h, h);
    Vector rhs(static_cast<Eigen::Index>(d) * h);
    for (int b = 0; b < d; ++b) {
        a.middleRows(static_cast<Eigen::Index>(b) * h, h) = rep.left[b] - rep.module_right[b];
        rhs.segment(static_cast<Eigen::Index>(b) * h, h) = rep.delta_vecs[b];
    }
    out.vec = lstsq(a, rhs);
    double res = (a * out.vec - rhs).norm();
    out.residuals["delta_implementation"] = res;
    if (res > 1e-9 * rhs.norm() + 1e-12)
        throw ResidualTooLarge("least-squares solution does not implement the derivation (residual " + std::to_string(res) + ")");
    return out;
}

XiVector vt_project(const BimoduleRep& rep, const XiVector& raw) {
    XiVector out;
    out.stage = XiVector::Stage::VtInvariant;
    if (rep.dim == 0) {
        out.vec = Vector::Zero(0);
        out.residuals = {{"ut_invariance", 0.0}, {"delta_implementation", 0.0}};
        return out;
    }
    HermEig e = eig_herm(rep.ut_gen);
    double scale = std::max(1.0, e.values.cwiseAbs().maxCoeff());
    Matrix p0 = Matrix::Zero(rep.dim, rep.dim);
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
        if (std::abs(e.values(i)) <= 1e-8 * scale) p0 += e.vectors.col(i) * e.vectors.col(i).adjoint();
    out.vec = p0 * raw.vec;
    out.residuals["ut_invariance"] = ut_invariance(rep, out.vec);
    out.residuals["delta_implementation"] = rep.implementation_residual(out.vec);
    return out;
}

XiVector j_symmetrize(const BimoduleRep& rep, const XiVector& vt) {
    if (vt.stage == XiVector::Stage::Raw) throw StageError("j_symmetrize requires a V_t-invariant vector");
    XiVector out;
    out.stage = XiVector::Stage::FullyInvariant;
    if (rep.dim == 0) {
        out.vec = Vector::Zero(0);
        out.residuals = {{"j_fixed", 0.0}, {"ut_invariance", 0.0}, {"delta_i_implementation", 0.0}};
        return out;
    }
    Vector zeta = rep.jconj(vt.vec);
    out.vec = (vt.vec - zeta) / (2.0 * I_UNIT);
    out.residuals["j_fixed"] = (rep.jconj(out.vec) - out.vec).norm();
    out.residuals["ut_invariance"] = ut_invariance(rep, out.vec);
    double res = rep.implementation_residual(out.vec, I_UNIT);
    out.residuals["delta_i_implementation"] = res;
    if (res > 1e-9 * rep.delta_norm() + 1e-12)
        throw ResidualTooLarge("symmetrized vector does not implement the derivation (residual " + std::to_string(res) + ")");
    return out;
}

HaarEstimate haar_inner_vector(const BimoduleRep& rep, int samples, std::uint64_t seed) {
    if (samples < 100) throw std::invalid_argument("haar_inner_vector: at least 100 samples are required");
    const MatAlgebra& m = rep.algebra;
    const int n = m.ambient_dim();
    Rng rng(seed);
    Vector c1 = m.coords(Matrix::Identity(n, n));
    Vector acc = Vector::Zero(static_cast<Eigen::Index>(m.dim()) * m.dim());
    for (int k = 0; k < samples; ++k) {
        Matrix u = haar_unitary_in(m, rng);
        acc += kron_vec(m.coords(u.adjoint()), m.coords(u));
    }
    Vector raw = kron_vec(c1, c1) - acc / double(samples);
    HaarEstimate est;
    est.samples = samples;
    est.xi.vec = rep.embed * raw;
    est.residual = rep.implementation_residual(est.xi.vec);
    est.xi.residuals["delta_implementation"] = est.residual;
    est.trend = est.residual * std::sqrt(double(samples));
    return est;
}

double TomitaReport::max_item() const { return std::max({item_a, item_b, item_c, item_d, item_e}); }

TomitaReport tomita_check(const BimoduleRep& rep, const QMSGenerator& l, const std::vector<double>& t_grid) {
    TomitaReport r;
    const MatAlgebra& m = rep.algebra;
    const StateData& s = rep.state;
    const int d = m.dim(), h = rep.dim;
    Matrix id = Matrix::Identity(h, h);
    // Residuals of the item identities are measured relative to max(1, ‖right-hand side‖).
    auto rel = [](const auto& diff, const auto& rhs) { return diff.norm() / std::max(1.0, rhs.norm()); };
    double lmax = rep.gram_spectrum.size() ? rep.gram_spectrum.cwiseAbs().maxCoeff() : 0.0;
    r.gram_min_eig = (lmax > 0) ? rep.gram_spectrum.minCoeff() / lmax : 0.0;

    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            cd lhs = rep.delta_vecs[a].dot(rep.delta_vecs[b]);
            cd rhs = (s.sigma() * carre_du_champ(l, m.basis()[a], m.basis()[b])).trace();
            r.delta_gamma = std::max(r.delta_gamma, std::abs(lhs - rhs));
            r.actions_commute = std::max(r.actions_commute, (rep.left[a] * rep.right[b] - rep.right[b] * rep.left[a]).norm());
        }
    if (h == 0) return r;

    r.j_antiunitary = (rep.jj.adjoint() * rep.jj - id).norm();
    r.j_involution = (rep.jj * rep.jj.conjugate() - id).norm();
    for (int a = 0; a < d; ++a) {
        const Matrix& e = m.basis()[a];
        Vector rc = rep.delta_of(sigma_z(s, cd(0, 0.5), e).adjoint());
        r.item_c = std::max(r.item_c, rel(rep.jconj(rep.delta_vecs[a]) - rc, rc));
        for (int b = 0; b < d; ++b) {
            const Matrix& f = m.basis()[b];
            Matrix lhs = rep.jj * (rep.left[a] * rep.right[b]).conjugate();
            Matrix rhs = rep.left_of(f.adjoint()) * rep.right_of(e.adjoint()) * rep.jj;
            r.item_d = std::max(r.item_d, rel(lhs - rhs, rhs));
        }
    }
    for (double t : t_grid) {
        Matrix u = rep.ut(t);
        r.ut_unitary = std::max(r.ut_unitary, (u.adjoint() * u - id).norm());
        r.item_e = std::max(r.item_e, (rep.jj * u.conjugate() - u * rep.jj).norm());
        for (int a = 0; a < d; ++a) {
            Matrix st = sigma_z(s, cd(t, 0), m.basis()[a]);
            Vector da = rep.delta_of(st);
            Matrix lo = rep.left_of(st), ro = rep.right_of(st), mo = rep.module_right_of(st);
            r.item_a = std::max(r.item_a, rel(u * rep.delta_vecs[a] - da, da));
            r.item_b = std::max(r.item_b, rel(u * rep.left[a] * u.adjoint() - lo, lo));
            r.item_b = std::max(r.item_b, rel(u * rep.right[a] * u.adjoint() - ro, ro));
            r.item_b = std::max(r.item_b, rel(u * rep.module_right[a] * u.adjoint() - mo, mo));
        }
    }
    return r;
}

}  // namespace qms
