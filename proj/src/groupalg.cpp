// groupalg.cpp — group algebras, length-function generators, cocycles and the explicit invariant vector
#include "qms/groupalg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace qms {

int GroupSpec::identity() const {
    for (int e = 0; e < order(); ++e) {
        bool ok = true;
        for (int g = 0; g < order() && ok; ++g) ok = cayley[e][g] == g && cayley[g][e] == g;
        if (ok) return e;
    }
    throw NotAGenerator("multiplication table has no identity element");
}

void GroupSpec::validate() const {
    const int n = order();
    if (n == 0) throw DimensionMismatch("empty group");
    if (static_cast<int>(inv.size()) != n || ell.size() != n) throw DimensionMismatch("inverse table or length has the wrong size");
    for (const auto& row : cayley) {
        if (static_cast<int>(row.size()) != n) throw DimensionMismatch("multiplication table is not square");
        for (int v : row)
            if (v < 0 || v >= n) throw DimensionMismatch("multiplication table entry out of range");
    }
    const int e = identity();
    for (int a = 0; a < n; ++a) {
        if (cayley[a][inv[a]] != e || cayley[inv[a]][a] != e) throw NotAGenerator("inverse table is inconsistent");
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]]) throw NotAGenerator("multiplication is not associative");
    }
    if (std::abs(ell(e)) > 1e-12) throw NotAGenerator("length of the identity must vanish");
    for (int g = 0; g < n; ++g) {
        if (ell(g) < -1e-12) throw NotAGenerator("length must be nonnegative");
        if (std::abs(ell(g) - ell(inv[g])) > 1e-12) throw NotAGenerator("length must satisfy ℓ(g⁻¹) = ℓ(g)");
    }
}

RMatrix GroupSpec::k_gram() const {
    const int n = order();
    RMatrix k(n, n);
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h) k(g, h) = 0.5 * (ell(g) + ell(h) - ell(cayley[inv[g]][h]));
    return k;
}

double GroupSpec::cnd_margin() const {
    RMatrix k = k_gram();
    Eigen::SelfAdjointEigenSolver<RMatrix> es(k);
    return es.eigenvalues().minCoeff() / std::max(1.0, k.norm());
}

GroupSpec group_from_table(std::string name, std::vector<std::vector<int>> cayley, RVector ell) {
    GroupSpec g;
    g.name = std::move(name);
    g.cayley = std::move(cayley);
    g.ell = std::move(ell);
    const int n = g.order();
    const int e = g.identity();
    g.inv.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (g.cayley[a][b] == e) g.inv[a] = b;
    if (std::count(g.inv.begin(), g.inv.end(), -1)) throw NotAGenerator("some element has no inverse");
    g.validate();
    return g;
}

GroupSpec cyclic_group(int n, const RVector& ell) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return group_from_table("Z" + std::to_string(n), t, ell);
}

GroupSpec cyclic_group(int n) {
    RVector ell(n);
    for (int k = 0; k < n; ++k) ell(k) = std::norm(1.0 - std::polar(1.0, 2 * std::numbers::pi * k / n));
    ell(0) = 0.0;
    return cyclic_group(n, ell);
}

namespace {

// Group of permutations given as image vectors, closed under composition
// (p∘q)(i) = p(q(i)); elements listed in BFS order from the identity.
GroupSpec permutation_group(std::string name, const std::vector<std::vector<int>>& gens) {
    const int deg = static_cast<int>(gens.front().size());
    std::vector<int> id(deg);
    for (int i = 0; i < deg; ++i) id[i] = i;
    std::vector<std::vector<int>> elems{id};
    std::deque<int> queue{0};
    auto compose = [&](const std::vector<int>& p, const std::vector<int>& q) {
        std::vector<int> r(deg);
        for (int i = 0; i < deg; ++i) r[i] = p[q[i]];
        return r;
    };
    auto index_of = [&](const std::vector<int>& p) {
        auto it = std::find(elems.begin(), elems.end(), p);
        return it == elems.end() ? -1 : static_cast<int>(it - elems.begin());
    };
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (const auto& s : gens) {
            auto p = compose(elems[cur], s);
            if (index_of(p) < 0) {
                elems.push_back(p);
                queue.push_back(static_cast<int>(elems.size()) - 1);
            }
        }
    }
    const int n = static_cast<int>(elems.size());
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = index_of(compose(elems[a], elems[b]));
    GroupSpec g = group_from_table(std::move(name), t, RVector::Zero(n));
    std::vector<int> gen_idx;
    for (const auto& s : gens) gen_idx.push_back(index_of(s));
    g.ell = word_length(g, gen_idx);
    g.validate();
    return g;
}

}  // namespace

GroupSpec symmetric_group_s3() {
    // Coxeter generators (0 1) and (1 2).
    return permutation_group("S3", {{1, 0, 2}, {0, 2, 1}});
}

GroupSpec dihedral_group_d4() {
    // Symmetries of the square on vertices 0..3: two adjacent reflections.
    return permutation_group("D4", {{1, 0, 3, 2}, {0, 3, 2, 1}});
}

RVector word_length(const GroupSpec& g, const std::vector<int>& gens) {
    const int n = g.order();
    std::vector<int> s = gens;
    for (int x : gens) s.push_back(g.inv[x]);
    std::vector<int> dist(n, -1);
    const int e = g.identity();
    dist[e] = 0;
    std::deque<int> queue{e};
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (int x : s) {
            int nxt = g.cayley[cur][x];
            if (dist[nxt] < 0) {
                dist[nxt] = dist[cur] + 1;
                queue.push_back(nxt);
            }
        }
    }
    if (std::count(dist.begin(), dist.end(), -1)) throw NotAGenerator("the given elements do not generate the group");
    RVector ell(n);
    for (int i = 0; i < n; ++i) ell(i) = dist[i];
    return ell;
}

Matrix left_regular(const GroupSpec& g, int elem) {
    const int n = g.order();
    Matrix l = Matrix::Zero(n, n);
    for (int h = 0; h < n; ++h) l(g.cayley[elem][h], h) = 1.0;
    return l;
}

MatAlgebra group_algebra(const GroupSpec& g) {
    const int n = g.order();
    std::vector<Matrix> basis;
    for (int x = 0; x < n; ++x) basis.push_back(left_regular(g, x) / std::sqrt(double(n)));
    return MatAlgebra::from_orthonormal(n, basis);
}

StateData group_trace(const GroupSpec& g) { return StateData::tracial(g.order()); }

QMSGenerator group_generator(const GroupSpec& g) {
    g.validate();
    if (g.cnd_margin() < -1e-12) throw NotCND("length function is not conditionally negative definite");
    const int n = g.order();
    MatAlgebra alg = group_algebra(g);
    Matrix l = Matrix::Zero(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(n) * n);
    for (int x = 0; x < n; ++x) {
        Vector v = vec(left_regular(g, x));
        l += (g.ell(x) / n) * v * v.adjoint();
    }
    return make_generator(SuperOp(l), alg, group_trace(g));
}

double Cocycle::max() const {
    return std::max({cocycle_residual, length_residual, orthogonal_residual, homomorphism_residual});
}

Cocycle cocycle_from_length(const GroupSpec& g) {
    g.validate();
    const int n = g.order();
    RMatrix k = g.k_gram();
    Eigen::SelfAdjointEigenSolver<RMatrix> es(k);
    double scale = std::max(1.0, k.norm());
    if (es.eigenvalues().minCoeff() < -1e-12 * scale) throw NotCND("K-Gram matrix has a negative eigenvalue");
    double lmax = es.eigenvalues().maxCoeff();
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 1e-12 * std::max(1.0, lmax)) keep.push_back(i);
    Cocycle c;
    c.dim = static_cast<int>(keep.size());
    c.b = RMatrix::Zero(c.dim, n);
    for (int r = 0; r < c.dim; ++r)
        c.b.row(r) = std::sqrt(es.eigenvalues()(keep[r])) * es.eigenvectors().col(keep[r]).transpose();
    RMatrix bpinv = c.b.completeOrthogonalDecomposition().pseudoInverse();
    for (int x = 0; x < n; ++x) {
        RMatrix shifted(c.dim, n);
        for (int h = 0; h < n; ++h) shifted.col(h) = c.b.col(g.cayley[x][h]) - c.b.col(x);
        c.pi.push_back(shifted * bpinv);
    }
    RMatrix id = RMatrix::Identity(c.dim, c.dim);
    for (int x = 0; x < n; ++x) {
        c.orthogonal_residual = std::max(c.orthogonal_residual, (c.pi[x].transpose() * c.pi[x] - id).norm());
        for (int h = 0; h < n; ++h) {
            int xh = g.cayley[x][h];
            c.cocycle_residual = std::max(c.cocycle_residual, (c.b.col(xh) - c.b.col(x) - c.pi[x] * c.b.col(h)).norm());
            c.length_residual = std::max(c.length_residual,
                                         std::abs((c.b.col(x) - c.b.col(h)).squaredNorm() - g.ell(g.cayley[g.inv[x]][h])));
            c.homomorphism_residual = std::max(c.homomorphism_residual, (c.pi[xh] - c.pi[x] * c.pi[h]).norm());
        }
    }
    return c;
}

double GroupXiReport::max() const { return std::max({delta_implementation, j_fixed, ce_identity, ksum, ksum_terms}); }

Vector group_xi(const GroupSpec& g, const BimoduleRep& rep) {
    const MatAlgebra& m = rep.algebra;
    const int n = g.order();
    const int d = m.dim();
    Vector raw = Vector::Zero(static_cast<Eigen::Index>(d) * d);
    Vector c1 = m.coords(Matrix::Identity(n, n));
    Vector c11 = kron(Matrix(c1), Matrix(c1)).col(0);
    // δ(λ_g)λ_{g⁻¹}Ω = (λ_g ⊗ λ_{g⁻¹} − 1 ⊗ 1)Ω in the raw tensor space.
    for (int x = 0; x < n; ++x) {
        Matrix cg = m.coords(left_regular(g, x));
        Matrix cgi = m.coords(left_regular(g, g.inv[x]));
        raw += kron(cg, cgi).col(0) - c11;
    }
    return (I_UNIT / double(n)) * rep.embed_raw(raw);
}

GroupXiReport group_xi_check(const GroupSpec& g) {
    QMSGenerator l = group_generator(g);
    BimoduleRep rep = build_gns_bimodule(l.algebra, l, *l.state);
    return group_xi_check(g, rep);
}

GroupXiReport group_xi_check(const GroupSpec& g, const BimoduleRep& rep) {
    GroupXiReport r;
    const int n = g.order();
    r.dim_h = rep.dim;
    RMatrix k = g.k_gram();
    double ksum = k.sum() / (double(n) * n);
    for (int x = 0; x < n; ++x) r.ksum_terms = std::max(r.ksum_terms, std::abs(k.col(x).sum() / n - 0.5 * g.ell(x)));
    if (rep.dim == 0) {
        // H = {0}: every quantity vanishes, so only ℓ ≡ 0 is consistent.
        for (int x = 0; x < n; ++x) r.ce_identity = std::max(r.ce_identity, std::abs(g.ell(x)) * std::sqrt(double(n)));
        r.ksum = r.ce_identity;
        return r;
    }
    r.xi = group_xi(g, rep);
    r.delta_implementation = rep.implementation_residual(r.xi, I_UNIT);
    r.j_fixed = (rep.jconj(r.xi) - r.xi).norm();
    Matrix kk = rep.inner(r.xi, r.xi);
    for (int x = 0; x < n; ++x) {
        Matrix lg = left_regular(g, x);
        Matrix ip = rep.inner(r.xi, rep.left_of(lg) * r.xi);
        r.ce_identity = std::max(r.ce_identity, (kk * lg + lg * kk - 2.0 * ip - g.ell(x) * lg).norm());
        r.ksum = std::max(r.ksum, (ip - (ksum - 0.5 * g.ell(x)) * lg).norm());
    }
    return r;
}

}  // namespace qms
