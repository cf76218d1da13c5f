// algebra.cpp — span closure, Wedderburn blocks and GNS-orthogonal conditional expectations
#include "qms/algebra.hpp"

#include "qms/modular.hpp"
#include "qms/superop.hpp"

#include <algorithm>
#include <cmath>

namespace qms {

namespace {

Matrix stack_vecs(const std::vector<Matrix>& ms, int n) {
    Matrix out(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(ms.size()));
    for (size_t i = 0; i < ms.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = vec(ms[i]);
    return out;
}

std::vector<Matrix> unstack(const Matrix& cols, int n) {
    std::vector<Matrix> out;
    out.reserve(static_cast<size_t>(cols.cols()));
    for (Eigen::Index i = 0; i < cols.cols(); ++i) out.push_back(unvec(cols.col(i), n));
    return out;
}

// Trace-orthonormal hermitian basis of the span of a *-closed family: the
// hermitian and anti-hermitian parts are orthonormalized as real vectors.
std::vector<Matrix> hermitian_orthonormal(const std::vector<Matrix>& ms, int n, double rel_cut = 1e-12) {
    const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
    RMatrix real(2 * n2, static_cast<Eigen::Index>(2 * ms.size()));
    for (size_t i = 0; i < ms.size(); ++i) {
        Matrix h1 = hermitian_part(ms[i]);
        Matrix h2 = (ms[i] - ms[i].adjoint()) / (2.0 * I_UNIT);
        Vector v1 = vec(h1), v2 = vec(h2);
        real.col(2 * i) << v1.real(), v1.imag();
        real.col(2 * i + 1) << v2.real(), v2.imag();
    }
    Eigen::BDCSVD<RMatrix> sv(real, Eigen::ComputeThinU);
    const RVector& s = sv.singularValues();
    std::vector<Matrix> out;
    double smax = s.size() ? s(0) : 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (!(s(k) > rel_cut * smax && s(k) > 0)) break;
        RVector u = sv.matrixU().col(k);
        Vector c(n2);
        for (Eigen::Index i = 0; i < n2; ++i) c(i) = cd(u(i), u(n2 + i));
        Matrix h = unvec(c, n);
        out.push_back(hermitian_part(h));
    }
    return out;
}

void check_square_family(const std::vector<Matrix>& gens, int& n) {
    if (gens.empty()) throw DimensionMismatch("at least one matrix is required");
    n = static_cast<int>(gens[0].rows());
    for (const auto& g : gens)
        if (g.rows() != n || g.cols() != n) throw DimensionMismatch("all matrices must be n×n with a common n");
}

}  // namespace

Vector MatAlgebra::coords(const Matrix& x) const {
    if (x.rows() != n_ || x.cols() != n_) throw DimensionMismatch("coords: matrix size does not match algebra");
    return bmat_.adjoint() * vec(x);
}

Matrix MatAlgebra::from_coords(const Vector& c) const {
    if (c.size() != dim()) throw DimensionMismatch("from_coords: wrong coordinate length");
    return unvec(bmat_ * c, n_);
}

double MatAlgebra::membership_residual(const Matrix& x) const { return (x - project(x)).norm(); }

std::vector<std::pair<int, int>> MatAlgebra::signature() const {
    std::vector<std::pair<int, int>> s;
    for (const auto& b : blocks_) s.emplace_back(b.dim, b.mult);
    std::sort(s.begin(), s.end());
    return s;
}

double MatAlgebra::reconstruction_residual() const {
    double worst = 0.0;
    for (const auto& e : basis_) {
        Matrix rec = Matrix::Zero(n_, n_);
        for (const auto& b : blocks_) {
            Matrix c = b.isometry.adjoint() * e * b.isometry;
            Matrix x = Matrix::Zero(b.dim, b.dim);
            for (int a = 0; a < b.dim; ++a)
                for (int bb = 0; bb < b.dim; ++bb)
                    for (int r = 0; r < b.mult; ++r) x(a, bb) += c(a * b.mult + r, bb * b.mult + r);
            x /= double(b.mult);
            rec += b.isometry * kron(x, Matrix::Identity(b.mult, b.mult)) * b.isometry.adjoint();
        }
        worst = std::max(worst, (rec - e).norm());
    }
    return worst;
}

double MatAlgebra::closure_residual() const {
    double worst = membership_residual(Matrix::Identity(n_, n_));
    for (const auto& a : basis_) {
        worst = std::max(worst, membership_residual(a.adjoint()));
        for (const auto& b : basis_) worst = std::max(worst, membership_residual(a * b));
    }
    return worst;
}

MatAlgebra MatAlgebra::from_orthonormal(int n, std::vector<Matrix> basis, std::uint64_t seed) {
    MatAlgebra alg;
    alg.n_ = n;
    alg.basis_ = std::move(basis);
    alg.bmat_ = stack_vecs(alg.basis_, n);
    const int d = alg.dim();

    // Center: z = Σ c_α e_α with [z, e_β] = 0 for all β.
    const Eigen::Index n2 = static_cast<Eigen::Index>(n) * n;
    Matrix comm(n2 * d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            comm.block(n2 * b, a, n2, 1) = vec(alg.basis_[a] * alg.basis_[b] - alg.basis_[b] * alg.basis_[a]);
    // A commutative algebra gives commutators at rounding level, which a purely
    // relative rank cut would mistake for a full-rank matrix.
    Matrix zc = comm.norm() <= 1e-10 * std::max(1, d) ? Matrix(Matrix::Identity(d, d)) : null_basis(comm, 1e-10);

    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix z = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < zc.cols(); ++k) z += cd(g(rng), g(rng)) * alg.from_coords(zc.col(k));
    HermEig ez = eig_herm(hermitian_part(z));
    double scale = 1.0 + ez.values.cwiseAbs().maxCoeff();

    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < n; ++i) {
        if (clusters.empty() || ez.values(i) - ez.values(clusters.back().back()) > 1e-6 * scale)
            clusters.push_back({i});
        else
            clusters.back().push_back(i);
    }

    for (const auto& cl : clusters) {
        Matrix v(n, static_cast<Eigen::Index>(cl.size()));
        for (size_t k = 0; k < cl.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = ez.vectors.col(cl[k]);
        const int r = static_cast<int>(cl.size());
        Matrix p = v * v.adjoint();
        std::vector<Matrix> comp;
        for (const auto& e : alg.basis_) comp.push_back(p * e * p);
        int dim_i = static_cast<int>(range_basis(stack_vecs(comp, n), 1e-10).cols());
        int ni = static_cast<int>(std::lround(std::sqrt(double(dim_i))));
        if (ni * ni != dim_i || ni == 0 || r % ni != 0)
            throw NumericalBreakdown("block detection failed: inconsistent block dimension");
        int mi = r / ni;

        // Maximal abelian piece: a generic hermitian element of the block.
        Matrix y = Matrix::Zero(n, n), yh = Matrix::Zero(n, n);
        for (const auto& e : comp) {
            y += cd(g(rng), g(rng)) * e;
            yh += cd(g(rng), g(rng)) * e;
        }
        HermEig ea = eig_herm(v.adjoint() * hermitian_part(yh) * v);
        std::vector<Matrix> units;  // orthonormal bases of the minimal projections Q_k (n × mi)
        for (int k = 0; k < ni; ++k) units.push_back(v * ea.vectors.middleCols(k * mi, mi));
        Matrix w(n, r);
        const Matrix& f1 = units[0];
        w.leftCols(mi) = f1;
        for (int k = 1; k < ni; ++k) {
            Matrix yk = units[k] * (units[k].adjoint() * y * f1);
            double nrm = yk.norm();
            if (nrm < 1e-12) throw NumericalBreakdown("block detection failed: degenerate matrix units");
            w.middleCols(k * mi, mi) = yk * (std::sqrt(double(mi)) / nrm);
        }
        alg.blocks_.push_back({ni, mi, w});
    }

    auto first_row = [](const Block& b) {
        for (Eigen::Index i = 0; i < b.isometry.rows(); ++i)
            if (b.isometry.row(i).norm() > 1e-8) return i;
        return b.isometry.rows();
    };
    std::stable_sort(alg.blocks_.begin(), alg.blocks_.end(),
                     [&](const Block& a, const Block& b) { return first_row(a) < first_row(b); });

    if (alg.reconstruction_residual() > 1e-10 * std::max(1.0, double(n)))
        throw NumericalBreakdown("block isometries do not reproduce the basis");
    return alg;
}

MatAlgebra algebra_from_generators(const std::vector<Matrix>& gens, std::uint64_t seed) {
    int n = 0;
    check_square_family(gens, n);
    std::vector<Matrix> words;
    words.push_back(Matrix::Identity(n, n));
    std::vector<Matrix> letters;
    for (const auto& g : gens) {
        letters.push_back(g);
        letters.push_back(g.adjoint());
    }
    for (const auto& l : letters) words.push_back(l);
    std::vector<Matrix> span = unstack(range_basis(stack_vecs(words, n)), n);

    // Closure under right multiplication by the letters gives all words.
    for (int iter = 0;; ++iter) {
        if (iter > n * n) throw NumericalBreakdown("span closure did not stabilize within n^2 iterations");
        std::vector<Matrix> next = span;
        for (const auto& s : span)
            for (const auto& l : letters) next.push_back(s * l);
        std::vector<Matrix> grown = unstack(range_basis(stack_vecs(next, n)), n);
        if (grown.size() == span.size()) break;
        span = std::move(grown);
    }
    return MatAlgebra::from_orthonormal(n, hermitian_orthonormal(span, n), seed);
}

MatAlgebra algebra_from_basis(const std::vector<Matrix>& spanning, std::uint64_t seed) {
    int n = 0;
    check_square_family(spanning, n);
    Matrix q = range_basis(stack_vecs(spanning, n));
    auto resid = [&](const Matrix& x) { Vector v = vec(x); return (v - q * (q.adjoint() * v)).norm(); };
    double worst = resid(Matrix::Identity(n, n));
    std::vector<Matrix> span = unstack(q, n);
    for (const auto& a : span) {
        worst = std::max(worst, resid(a.adjoint()));
        for (const auto& b : span) worst = std::max(worst, resid(a * b));
    }
    double scale = 1.0;
    for (const auto& a : spanning) scale = std::max(scale, a.norm());
    if (worst > 1e-10 * scale * scale)
        throw NotAnAlgebra("span is not a unital *-algebra (closure residual " + std::to_string(worst) + ")");
    return MatAlgebra::from_orthonormal(n, hermitian_orthonormal(span, n), seed);
}

MatAlgebra full_algebra(int n) {
    std::vector<Matrix> b;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) b.push_back(matrix_unit(n, j, k));
    return MatAlgebra::from_orthonormal(n, std::move(b));
}

MatAlgebra diagonal_algebra(int n) {
    std::vector<Matrix> b;
    for (int j = 0; j < n; ++j) b.push_back(matrix_unit(n, j, j));
    return MatAlgebra::from_orthonormal(n, std::move(b));
}

MatAlgebra block_diagonal_algebra(const std::vector<int>& sizes) {
    int n = 0;
    for (int s : sizes) {
        if (s <= 0) throw DimensionMismatch("block sizes must be positive");
        n += s;
    }
    std::vector<Matrix> b;
    int off = 0;
    for (int s : sizes) {
        for (int k = 0; k < s; ++k)
            for (int j = 0; j < s; ++j) b.push_back(matrix_unit(n, off + j, off + k));
        off += s;
    }
    return MatAlgebra::from_orthonormal(n, std::move(b));
}

Matrix haar_unitary_in(const MatAlgebra& m, Rng& rng) {
    const int n = m.ambient_dim();
    Matrix u = Matrix::Zero(n, n);
    for (const auto& b : m.blocks())
        u += b.isometry * kron(haar_unitary(b.dim, rng), Matrix::Identity(b.mult, b.mult)) * b.isometry.adjoint();
    return u;
}

CondExpectation conditional_expectation(const MatAlgebra& m, const MatAlgebra& nalg, const StateData& sigma,
                                        double tol) {
    const int n = m.ambient_dim();
    if (nalg.ambient_dim() != n || sigma.dim() != n)
        throw DimensionMismatch("conditional_expectation: ambient dimensions differ");
    for (const auto& f : nalg.basis())
        if (m.membership_residual(f) > 1e-10 * std::max(1.0, f.norm()))
            throw DimensionMismatch("conditional_expectation: target is not contained in source");

    const int d = nalg.dim();
    Matrix gram(d, d);
    Matrix fs(static_cast<Eigen::Index>(n) * n, d);
    for (int j = 0; j < d; ++j) fs.col(j) = vec(nalg.basis()[j] * sigma.sigma());
    gram = nalg.basis_matrix().adjoint() * fs;  // G_ij = tr(f_i* f_j σ) = tr(σ f_i* f_j)
    Matrix e = nalg.basis_matrix() * gram.inverse() * fs.adjoint();

    Matrix dmod = modular_operator(sigma).mat();
    double res = (dmod * e - e * dmod).norm() / std::max(1.0, dmod.norm() * e.norm());
    if (res > tol)
        throw ModularInvarianceViolated("the modular group of the state does not leave the subalgebra invariant (residual " +
                                        std::to_string(res) + ")");
    return {m, nalg, e, res};
}

CondExpectationReport check_cond_expectation(const CondExpectation& e, const StateData& sigma) {
    const int n = e.source.ambient_dim();
    SuperOp map(e.map);
    CondExpectationReport r;
    r.unital = map.unital_residual();
    r.cp_min_eig = map.choi_min_eig();
    r.idempotent = (e.map * e.map - e.map).norm();
    Rng rng(0xce11ULL);
    std::vector<Matrix> xs;
    for (int k = 0; k < 4; ++k) {
        Vector c = Vector::Zero(e.source.dim());
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = ginibre(1, rng)(0, 0);
        xs.push_back(e.source.from_coords(c));
    }
    for (const auto& x : xs) {
        Matrix ex = map(x);
        for (const auto& a : e.target.basis())
            for (const auto& b : e.target.basis())
                r.bimodule = std::max(r.bimodule, (map(a * x * b) - a * ex * b).norm());
        r.state_preserving = std::max(r.state_preserving, std::abs((sigma.sigma() * (ex - x)).trace()));
    }
    r.gns_selfadjoint = gns_symmetric_check(map, sigma);
    (void)n;
    return r;
}

}  // namespace qms
