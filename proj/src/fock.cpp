// fock.cpp — relative tensor products and the truncated Fock representation
#include "qms/fock.hpp"

#include <algorithm>
#include <cmath>

namespace qms {

namespace {

Matrix herm_apply(const Matrix& a, double (*f)(double), double scale) {
    if (a.size() == 0) return a;
    HermEig e = eig_herm(a);
    Vector d(e.values.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = f(scale * e.values(i));
    return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

double real_exp(double x) { return std::exp(x); }

}  // namespace

Vector RelTensor::tensor(const Vector& u, const Vector& v) const {
    return embed * kron(Matrix(u), Matrix(v)).col(0);
}

RelTensor rel_tensor(const Correspondence& h1, const Correspondence& h2) {
    if (h1.algebra.dim() != h2.algebra.dim() || h1.algebra.ambient_dim() != h2.algebra.ambient_dim())
        throw DimensionMismatch("rel_tensor: correspondences over different algebras");
    RelTensor t;
    t.algebra = h1.algebra;
    t.state = h1.state;
    t.dim1 = h1.dim;
    t.dim2 = h2.dim;
    const Eigen::Index raw = static_cast<Eigen::Index>(h1.dim) * h2.dim;
    Matrix gram = Matrix::Zero(raw, raw);
    for (int i = 0; i < h1.dim; ++i)
        for (int k = i; k < h1.dim; ++k) {
            Vector fi = Vector::Unit(h1.dim, i), fk = Vector::Unit(h1.dim, k);
            Matrix blk = h2.left_of(h1.inner(fi, fk));
            gram.block(static_cast<Eigen::Index>(i) * h2.dim, static_cast<Eigen::Index>(k) * h2.dim, h2.dim, h2.dim) = blk;
            if (k != i)
                gram.block(static_cast<Eigen::Index>(k) * h2.dim, static_cast<Eigen::Index>(i) * h2.dim, h2.dim, h2.dim) =
                    blk.adjoint();
        }
    HermEig e = eig_herm(hermitian_part(gram));
    t.gram_spectrum = e.values;
    double lmax = e.values.size() ? e.values.maxCoeff() : 0.0;
    std::vector<int> keep;
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
        if (lmax > 0 && e.values(i) > 1e-11 * lmax) keep.push_back(static_cast<int>(i));
    t.dim = static_cast<int>(keep.size());
    Matrix w(raw, t.dim);
    Vector sq(t.dim), isq(t.dim);
    for (int k = 0; k < t.dim; ++k) {
        w.col(k) = e.vectors.col(keep[k]);
        sq(k) = std::sqrt(e.values(keep[k]));
        isq(k) = 1.0 / sq(k);
    }
    t.embed = sq.asDiagonal() * w.adjoint();
    t.lift = w * isq.asDiagonal();
    Matrix id1 = Matrix::Identity(h1.dim, h1.dim), id2 = Matrix::Identity(h2.dim, h2.dim);
    for (int a = 0; a < h1.algebra.dim(); ++a) {
        t.left.push_back(t.embed * kron(h1.left[a], id2) * t.lift);
        t.right.push_back(t.embed * kron(id1, h2.right[a]) * t.lift);
    }
    return t;
}

Matrix FockRep::creation(const Vector& zeta) const {
    Matrix a = Matrix::Zero(total, total);
    if (dims[1] == 0) return a;
    a.block(offsets[1], offsets[0], dims[1], dims[0]) = rep.left_bounded(zeta);
    if (dims[2] > 0)
        a.block(offsets[2], offsets[1], dims[2], dims[1]) = hh.embed * kron(Matrix(zeta), Matrix::Identity(dims[1], dims[1]));
    return a;
}

Matrix FockRep::alpha(const Vector& zeta) const {
    if (dims[1] == 0) return Matrix::Zero(total, total);
    Matrix ehalf = herm_apply(rep.ut_gen, real_exp, 0.5);
    Vector partner = rep.jconj(ehalf * zeta);
    return creation(zeta) + creation(partner).adjoint();
}

Matrix FockRep::left_of(const Matrix& x) const {
    Matrix out = Matrix::Zero(total, total);
    out.block(offsets[0], offsets[0], dims[0], dims[0]) = l2.left_of(x);
    if (dims[1]) out.block(offsets[1], offsets[1], dims[1], dims[1]) = rep.left_of(x);
    if (dims[2]) out.block(offsets[2], offsets[2], dims[2], dims[2]) = hh.left_of(x);
    return out;
}

Matrix FockRep::expect(const Matrix& b) const {
    Vector w = b.block(offsets[0], offsets[0], dims[0], dims[0]) * vacuum.head(dims[0]);
    return rep.algebra.from_coords(w) * rep.state.power(-0.5);
}

Matrix FockRep::expect_product(const Matrix& b, const Matrix& c) const {
    Matrix b0 = b.middleCols(offsets[0], dims[0]), c0 = c.middleCols(offsets[0], dims[0]);
    Vector w = b0.adjoint() * (c0 * vacuum.head(dims[0]));
    return rep.algebra.from_coords(w) * rep.state.power(-0.5);
}

Matrix FockRep::ut(double t) const {
    const MatAlgebra& m = rep.algebra;
    Matrix u = Matrix::Zero(total, total);
    u.block(offsets[0], offsets[0], dims[0], dims[0]) =
        coord_left(m, rep.state.cpower(I_UNIT * t)) * coord_right(m, rep.state.cpower(-I_UNIT * t));
    if (dims[1] == 0) return u;
    Matrix u1 = rep.ut(t);
    u.block(offsets[1], offsets[1], dims[1], dims[1]) = u1;
    if (dims[2]) u.block(offsets[2], offsets[2], dims[2], dims[2]) = hh.embed * kron(u1, u1) * hh.lift;
    return u;
}

Matrix FockRep::commutant_partner() const {
    Matrix b = Matrix::Zero(total, total);
    if (dims[1] == 0) return b;
    const MatAlgebra& m = rep.algebra;
    Matrix si = rep.state.power(-0.5);
    for (int a = 0; a < dims[0]; ++a) b.col(offsets[0] + a).segment(offsets[1], dims[1]) = rep.left_of(m.basis()[a] * si) * xi;
    if (dims[2])
        b.block(offsets[2], offsets[1], dims[2], dims[1]) = hh.embed * kron(Matrix::Identity(dims[1], dims[1]), Matrix(xi));
    return b + b.adjoint();
}

FockRep build_fock(const BimoduleRep& rep, const XiVector& xi, int depth) {
    if (depth != 2) throw std::invalid_argument("build_fock: only depth 2 is supported");
    if (xi.stage != XiVector::Stage::FullyInvariant)
        throw StageError("build_fock requires the fully invariant vector (stage " + stage_name(xi.stage) + ")");
    FockRep f;
    f.rep = rep;
    f.xi = xi.vec;
    f.l2 = l2_correspondence(rep.algebra, rep.state);
    f.hh = rel_tensor(rep, rep);
    f.dims = {f.l2.dim, rep.dim, f.hh.dim};
    f.offsets = {0, f.dims[0], f.dims[0] + f.dims[1]};
    f.total = f.dims[0] + f.dims[1] + f.dims[2];
    f.vacuum = Vector::Zero(f.total);
    f.vacuum.head(f.dims[0]) = rep.algebra.coords(rep.state.omega());
    f.a_mat = f.creation(f.xi);
    f.s_mat = f.a_mat + f.a_mat.adjoint();
    return f;
}

double gamma_identity_check(const FockRep& fock, const QMSGenerator& l) {
    const auto& basis = fock.rep.algebra.basis();
    std::vector<Matrix> comm;
    for (const auto& x : basis) {
        Matrix lx = fock.left_of(x);
        comm.push_back(lx * fock.s_mat - fock.s_mat * lx);
    }
    double worst = 0.0;
    for (size_t a = 0; a < basis.size(); ++a)
        for (size_t b = 0; b < basis.size(); ++b)
            worst = std::max(worst, (carre_du_champ(l, basis[a], basis[b]) - fock.expect_product(comm[a], comm[b])).norm());
    return worst;
}

double FockReport::max() const {
    return std::max({s_hermitian, expectation_a, expectation_s, alpha_delta, alpha_bimodule, mvalued, gamma, centralizer,
                     covariance, commutant, tensor_unit, left_bounded});
}

FockReport fock_check(const FockRep& f, const QMSGenerator& l, const std::vector<double>& t_grid) {
    FockReport r;
    const BimoduleRep& rep = f.rep;
    const MatAlgebra& m = rep.algebra;
    const auto& basis = m.basis();
    const int d = m.dim();
    const Matrix& s = f.s_mat;

    r.s_hermitian = (s - s.adjoint()).norm();
    r.expectation_a = f.expect(f.a_mat).norm();
    r.expectation_s = f.expect(s).norm();
    r.gamma = gamma_identity_check(f, l);

    std::vector<Matrix> lefts;
    for (const auto& x : basis) lefts.push_back(f.left_of(x));
    for (int a = 0; a < d; ++a) {
        Matrix comm = I_UNIT * (lefts[a] * s - s * lefts[a]);
        r.alpha_delta = std::max(r.alpha_delta, (f.alpha(rep.delta_vecs[a]) - comm).norm());
    }

    // Vectors xξy and their images under α.
    std::vector<Vector> zetas;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            Vector z = rep.dim ? Vector(rep.left[a] * rep.module_right[b] * f.xi) : Vector::Zero(0);
            zetas.push_back(z);
            Matrix lhs = f.alpha(z);
            r.alpha_bimodule = std::max(r.alpha_bimodule, (lhs - lefts[a] * s * lefts[b]).norm());
        }
    // E(α(ζ₁)*α(ζ₂)) over a spread-out subset of pairs.
    std::vector<Matrix> alphas;
    const size_t stride = std::max<size_t>(1, zetas.size() / 8);
    std::vector<size_t> picked;
    for (size_t i = 0; i < zetas.size(); i += stride) picked.push_back(i);
    for (size_t i : picked) alphas.push_back(f.alpha(zetas[i]));
    for (size_t i = 0; i < picked.size(); ++i)
        for (size_t j = 0; j < picked.size(); ++j) {
            Matrix rhs = rep.dim ? rep.inner(zetas[picked[i]], zetas[picked[j]]) : Matrix::Zero(m.ambient_dim(), m.ambient_dim());
            r.mvalued = std::max(r.mvalued, (f.expect_product(alphas[i], alphas[j]) - rhs).norm());
        }

    // Centralizer property on words b = x and b = x s y.
    const Vector& om = f.vacuum;
    Vector sOm = s * om;
    auto defect = [&](const Matrix& b) {
        cd v = sOm.dot(b * om) - (b.adjoint() * om).dot(sOm);
        return std::abs(v);
    };
    for (int a = 0; a < d; ++a) {
        r.centralizer = std::max(r.centralizer, defect(lefts[a]));
        for (int b = 0; b < d; ++b) r.centralizer = std::max(r.centralizer, defect(lefts[a] * s * lefts[b]));
    }

    for (double t : t_grid) {
        Matrix u = f.ut(t);
        r.covariance = std::max(r.covariance, (u * s * u.adjoint() - s).norm());
        for (int a = 0; a < d; ++a)
            r.covariance = std::max(r.covariance, (u * lefts[a] * u.adjoint() - f.left_of(sigma_z(rep.state, cd(t, 0), basis[a]))).norm());
    }

    // [s,t] on inputs from levels 0 and 1; every path stays inside the truncation.
    Matrix tp = f.commutant_partner();
    Matrix comm = s * tp - tp * s;
    r.commutant = comm.leftCols(f.dims[0] + f.dims[1]).norm();

    // H ⊗_φ L² ≅ H and the left-bounded identification.
    RelTensor hl = rel_tensor(rep, f.l2);
    r.tensor_unit = std::abs(hl.dim - rep.dim);
    if (rep.dim && hl.dim == rep.dim) {
        Vector om0 = f.vacuum.head(f.dims[0]);
        for (int i = 0; i < rep.dim; ++i)
            for (int k = 0; k < rep.dim; ++k) {
                Vector fi = Vector::Unit(rep.dim, i), fk = Vector::Unit(rep.dim, k);
                Vector ti = hl.tensor(fi, om0), tk = hl.tensor(fk, om0);
                r.tensor_unit = std::max(r.tensor_unit, std::abs(ti.dot(tk) - fi.dot(fk)));
                Matrix lb = hl.left_bounded(ti).adjoint() * hl.left_bounded(tk);
                Matrix target = coord_left(m, rep.inner(fi, fk));
                r.left_bounded = std::max(r.left_bounded, (lb - target).norm());
            }
    }
    return r;
}

}  // namespace qms
