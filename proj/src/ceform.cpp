// ceform.cpp — Φ from the invariant vector, CE identity, generators from Φ, Alicki decomposition by Bohr sectors
#include "qms/ceform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qms {

SuperOp phi_from_xi(const BimoduleRep& rep, const XiVector& xi) {
    if (xi.stage != XiVector::Stage::FullyInvariant)
        throw StageError("phi_from_xi requires the fully invariant vector (stage " + stage_name(xi.stage) + ")");
    const MatAlgebra& m = rep.algebra;
    const int n = m.ambient_dim(), d = m.dim();
    if (rep.dim == 0) return zero_map(n);
    Matrix f(static_cast<Eigen::Index>(n) * n, d);
    for (int a = 0; a < d; ++a) f.col(a) = vec(2.0 * rep.inner(xi.vec, rep.left[a] * xi.vec));
    return SuperOp(f * m.basis_matrix().adjoint());
}

double ce_identity_check(const QMSGenerator& l, const BimoduleRep& rep, const XiVector& xi) {
    const MatAlgebra& m = rep.algebra;
    const int n = m.ambient_dim();
    Matrix k = rep.dim ? rep.inner(xi.vec, xi.vec) : Matrix::Zero(n, n);
    double worst = 0.0;
    for (int a = 0; a < m.dim(); ++a) {
        const Matrix& x = m.basis()[a];
        Matrix phix = rep.dim ? Matrix(2.0 * rep.inner(xi.vec, rep.left[a] * xi.vec)) : Matrix::Zero(n, n);
        worst = std::max(worst, (l(x) - (k * x + x * k - phix)).norm());
    }
    return worst;
}

CEResult ce_pipeline(const QMSGenerator& l, const StateData& sigma) {
    CEResult r;
    r.rep = build_gns_bimodule(l.algebra, l, sigma);
    r.xi_raw = solve_inner_vector(r.rep);
    r.xi_vt = vt_project(r.rep, r.xi_raw);
    r.xi = j_symmetrize(r.rep, r.xi_vt);
    r.phi = phi_from_xi(r.rep, r.xi);
    const int n = l.dim();
    r.k = 0.5 * r.phi(Matrix::Identity(n, n));
    r.ce_residual = ce_identity_check(l, r.rep, r.xi);
    return r;
}

QMSGenerator generator_from_phi(const SuperOp& phi, const StateData& sigma) {
    return generator_from_phi(phi, sigma, full_algebra(phi.dim()));
}

QMSGenerator generator_from_phi(const SuperOp& phi, const StateData& sigma, const MatAlgebra& algebra) {
    const int n = phi.dim();
    if (sigma.dim() != n || algebra.ambient_dim() != n) throw DimensionMismatch("generator_from_phi: sizes differ");
    SuperOp proj(algebra.basis_matrix() * algebra.basis_matrix().adjoint());
    SuperOp phin = algebra.is_full() ? phi : phi * proj;
    if (!phin.is_cp(1e-10)) throw NotCP("Φ is not completely positive (scaled Choi eigenvalue " + std::to_string(phin.choi_min_eig()) + ")");
    double scale = std::max(1.0, phin.norm());
    if (gns_symmetric_check_on(phin, sigma, algebra) > 1e-9 * scale) throw NotSymmetric("Φ is not GNS-symmetric");
    Matrix p1 = phin(Matrix::Identity(n, n));
    SuperOp l = (left_mult(p1) + right_mult(p1)) * cd(0.5) - phin;
    if (!algebra.is_full()) l = l * proj;
    QMSGenerator g = make_generator(l, algebra, sigma);
    if (!cnd_check(g).cnd()) throw NotCND("generator built from Φ failed the CND check");
    if (gns_symmetric_check_on(l, sigma, algebra) > 1e-9 * scale) throw NotSymmetric("generator built from Φ is not GNS-symmetric");
    return g;
}

SuperOp random_symmetric_phi(const StateData& sigma, Rng& rng, int terms) {
    const int n = sigma.dim();
    const Matrix& u = sigma.eigenvectors();
    RVector ll = sigma.eigenvalues().array().log();
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_real_distribution<double> mu(0.2, 1.5);
    std::normal_distribution<double> g(0.0, 1.0);
    SuperOp phi = zero_map(n);
    for (int t = 0; t < terms; ++t) {
        int a = pick(rng), b = pick(rng);
        double w = ll(b) - ll(a);
        Matrix v = Matrix::Zero(n, n);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                if (std::abs(ll(q) - ll(p) - w) < 1e-10) v(p, q) = cd(g(rng), g(rng));
        v = u * v * u.adjoint();
        double m = mu(rng);
        phi = phi + sandwich(v.adjoint(), v) * cd(m * std::exp(-w / 2)) + sandwich(v, v.adjoint()) * cd(m * std::exp(w / 2));
    }
    return phi;
}

// ---------------------------------------------------------------------------
// Alicki decomposition

namespace {

Vector uvec(const Matrix& v) { return vec(Matrix(v.adjoint())); }

void fix_phase(Matrix& v, bool hermitian) {
    double mx = v.cwiseAbs().maxCoeff();
    if (mx == 0.0) return;
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v.data()[i]) >= mx * (1 - 1e-9)) {
            idx = i;
            break;
        }
    cd p = v.data()[idx];
    if (hermitian) {
        double s = std::abs(p.real()) > 1e-12 * mx ? p.real() : p.imag();
        if (s < 0) v = -v;
    } else {
        v *= std::conj(p) / std::abs(p);
    }
}

struct Pair {
    double omega;
    int a, b;
};

struct Tagged {
    AlickiTerm term;
    int id = 0;
    int partner = 0;
};

}  // namespace

AlickiForm alicki_decompose(const QMSGenerator& l, const StateData& sigma, double tol) {
    const int n = l.dim();
    if (!l.algebra.is_full()) throw NonFullAlgebra("Alicki decomposition needs the full matrix algebra; extend the generator first");
    if (sigma.dim() != n) throw DimensionMismatch("alicki_decompose: state size differs");
    double lscale = std::max(1.0, l.op.norm());
    double sym = gns_symmetric_check(l.op, sigma);
    if (sym > std::max(tol, 1e-8) * lscale)
        throw NotDBC("generator does not satisfy the σ-detailed balance condition (residual " + std::to_string(sym) + ")");

    CEResult ce = ce_pipeline(l, sigma);
    Matrix c = choi(ce.phi);
    double cscale = std::max(1e-300, c.norm());

    const Matrix& u = sigma.eigenvectors();
    RVector ll = sigma.eigenvalues().array().log();
    std::vector<Pair> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) pairs.push_back({ll(b) - ll(a), a, b});
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.omega > y.omega; });
    std::vector<std::vector<Pair>> sectors;
    for (const auto& p : pairs) {
        if (sectors.empty() || std::abs(sectors.back().front().omega - p.omega) >= 1e-10)
            sectors.push_back({p});
        else
            sectors.back().push_back(p);
    }
    const int ns = static_cast<int>(sectors.size());
    auto unit_of = [&](const Pair& p) { return Matrix(u * matrix_unit(n, p.a, p.b) * u.adjoint()); };
    std::vector<double> omegas(ns);
    for (int s = 0; s < ns; ++s) {
        double acc = 0.0;
        for (const auto& p : sectors[s]) acc += p.omega;
        omegas[s] = acc / double(sectors[s].size());
    }

    // Cross-sector blocks of the Kossakowski matrix must vanish.
    {
        Matrix ball(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(n) * n);
        std::vector<int> owner;
        Eigen::Index col = 0;
        for (int s = 0; s < ns; ++s)
            for (const auto& p : sectors[s]) {
                ball.col(col++) = uvec(unit_of(p));
                owner.push_back(s);
            }
        Matrix mall = ball.adjoint() * c * ball;
        double cross = 0.0;
        for (Eigen::Index i = 0; i < mall.rows(); ++i)
            for (Eigen::Index j = 0; j < mall.cols(); ++j)
                if (owner[i] != owner[j]) cross = std::max(cross, std::abs(mall(i, j)));
        if (cross > 1e-8 * cscale)
            throw NotDBC("Kraus directions mix Bohr sectors (cross-sector weight " + std::to_string(cross) + ")");
    }

    AlickiForm form;
    struct Found {
        int sector;
        double mu;
        Matrix v;
    };
    std::vector<Found> found;
    std::vector<BohrSector> info(ns);
    double mu_max = 0.0;

    for (int s = 0; s < ns; ++s) {
        info[s].omega = omegas[s];
        info[s].dim = static_cast<int>(sectors[s].size());
        if (omegas[s] < -1e-10) continue;  // handled through the adjoint pairing
        if (std::abs(omegas[s]) <= 1e-10) {
            // Hermitian orthonormal basis of the commutant of σ, identity removed.
            std::vector<Matrix> herm;
            for (const auto& p : sectors[s]) {
                if (p.a == p.b)
                    herm.push_back(unit_of(p));
                else if (p.a < p.b) {
                    Matrix e = u * matrix_unit(n, p.a, p.b) * u.adjoint();
                    herm.push_back((e + e.adjoint()) / std::sqrt(2.0));
                    herm.push_back(I_UNIT * (e - e.adjoint()) / std::sqrt(2.0));
                }
            }
            const int m = static_cast<int>(herm.size());
            RVector t(m);
            for (int q = 0; q < m; ++q) t(q) = herm[q].trace().real() / std::sqrt(double(n));
            RMatrix proj = RMatrix::Identity(m, m) - t * t.transpose() / t.squaredNorm();
            Eigen::SelfAdjointEigenSolver<RMatrix> pe(proj);
            std::vector<Matrix> basis;
            for (int k = 0; k < m; ++k) {
                if (pe.eigenvalues()(k) < 0.5) continue;
                Matrix b = Matrix::Zero(n, n);
                for (int q = 0; q < m; ++q) b += pe.eigenvectors()(q, k) * herm[q];
                basis.push_back(hermitian_part(b));
            }
            info[s].dim = static_cast<int>(basis.size());
            if (basis.empty()) continue;
            Matrix bu(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(basis.size()));
            for (size_t q = 0; q < basis.size(); ++q) bu.col(static_cast<Eigen::Index>(q)) = uvec(basis[q]);
            Matrix kos = bu.adjoint() * c * bu;
            if (kos.imag().norm() > 1e-8 * cscale)
                form.diagnostics.push_back("0-sector Kossakowski matrix has an imaginary part of norm " +
                                           std::to_string(kos.imag().norm()));
            Eigen::SelfAdjointEigenSolver<RMatrix> ke(RMatrix(0.5 * (kos.real() + kos.real().transpose())));
            for (Eigen::Index k = ke.eigenvalues().size() - 1; k >= 0; --k) {
                Matrix v = Matrix::Zero(n, n);
                for (size_t q = 0; q < basis.size(); ++q) v += ke.eigenvectors()(static_cast<Eigen::Index>(q), k) * basis[q];
                found.push_back({s, ke.eigenvalues()(k), hermitian_part(v)});
                mu_max = std::max(mu_max, ke.eigenvalues()(k));
            }
            continue;
        }
        Matrix bu(static_cast<Eigen::Index>(n) * n, static_cast<Eigen::Index>(sectors[s].size()));
        std::vector<Matrix> basis;
        for (size_t q = 0; q < sectors[s].size(); ++q) {
            basis.push_back(unit_of(sectors[s][q]));
            bu.col(static_cast<Eigen::Index>(q)) = uvec(basis.back());
        }
        HermEig ke = eig_herm(bu.adjoint() * c * bu);
        for (Eigen::Index k = ke.values.size() - 1; k >= 0; --k) {
            Matrix v = Matrix::Zero(n, n);
            for (size_t q = 0; q < basis.size(); ++q) v += std::conj(ke.vectors(static_cast<Eigen::Index>(q), k)) * basis[q];
            found.push_back({s, ke.values(k), v});
            mu_max = std::max(mu_max, ke.values(k));
        }
    }

    auto mirror = [&](int s) {
        int best = -1;
        for (int r = 0; r < ns; ++r)
            if (std::abs(omegas[r] + omegas[s]) < 1e-9 && (best < 0 || std::abs(omegas[r] + omegas[s]) < std::abs(omegas[best] + omegas[s])))
                best = r;
        return best;
    };

    std::vector<Tagged> tagged;
    const double cut = 1e-11 * mu_max;
    for (auto& f : found) {
        if (f.mu < -1e-9 * std::max(1.0, mu_max))
            throw NumericalBreakdown("negative Kraus weight in the Choi matrix of Φ: " + std::to_string(f.mu));
        if (f.mu <= cut) continue;
        double w = omegas[f.sector];
        bool herm = std::abs(w) <= 1e-10;
        fix_phase(f.v, herm);
        double cval = f.mu * std::exp(w / 2) / 2;
        int id = static_cast<int>(tagged.size());
        if (herm) {
            tagged.push_back({{cval, 0.0, f.v}, id, id});
            info[f.sector].rank++;
            continue;
        }
        Matrix vs = f.v.adjoint();
        Vector uv = uvec(vs);
        double mup = (uv.adjoint() * c * uv)(0, 0).real();
        double cp = mup * std::exp(-w / 2) / 2;
        if (std::abs(cval - cp) > 1e-8 * std::max(1.0, cval))
            form.diagnostics.push_back("paired weights differ: c = " + std::to_string(cval) + ", c* = " + std::to_string(cp));
        double cbar = 0.5 * (cval + cp);
        tagged.push_back({{cbar, w, f.v}, id, id + 1});
        tagged.push_back({{cbar, -w, vs}, id + 1, id});
        info[f.sector].rank++;
        int ms = mirror(f.sector);
        if (ms >= 0) info[ms].rank++;
    }

    std::vector<int> order(tagged.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        const auto& a = tagged[x].term;
        const auto& b = tagged[y].term;
        if (std::abs(a.omega - b.omega) > 1e-10) return a.omega > b.omega;
        return a.c > b.c;
    });
    std::vector<int> pos(tagged.size());
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = static_cast<int>(i);
    for (size_t i = 0; i < order.size(); ++i) {
        form.terms.push_back(tagged[order[i]].term);
        form.pairing.push_back(pos[tagged[order[i]].partner]);
    }
    form.sectors = info;

    double rec = (alicki_rebuild(form, n).mat() - l.op.mat()).norm();
    if (rec > tol * lscale) form.diagnostics.push_back("reconstruction residual " + std::to_string(rec));
    return form;
}

SuperOp alicki_rebuild(const AlickiForm& form, int n) {
    SuperOp l = zero_map(n);
    for (const auto& t : form.terms) {
        const Matrix& v = t.v;
        Matrix vs = v.adjoint();
        SuperOp first = left_mult(vs * v) - sandwich(vs, v);   // v*[v,·]
        SuperOp second = sandwich(v, vs) - right_mult(v * vs);  // [v,·]v*
        l = l + (first * cd(std::exp(-t.omega / 2)) - second * cd(std::exp(t.omega / 2))) * cd(t.c);
    }
    return l;
}

SuperOp alicki_rebuild_literal(const AlickiForm& form, int n) {
    SuperOp l = zero_map(n);
    for (const auto& t : form.terms) {
        const Matrix& v = t.v;
        Matrix vs = v.adjoint();
        SuperOp first = left_mult(vs * v) - sandwich(vs, v);   // v*[v,·]
        SuperOp second = sandwich(vs, v) - right_mult(vs * v);  // [v*,·]v
        l = l + (first * cd(std::exp(-t.omega / 2)) - second * cd(std::exp(t.omega / 2))) * cd(t.c);
    }
    return l;
}

SuperOp alicki_phi(const AlickiForm& form, int n) {
    SuperOp phi = zero_map(n);
    for (const auto& t : form.terms) phi = phi + sandwich(t.v.adjoint(), t.v) * cd(2 * t.c * std::exp(-t.omega / 2));
    return phi;
}

double AlickiInvariants::max() const { return std::max({traceless, orthonormal, pairing, eigen}); }

AlickiInvariants alicki_invariants(const AlickiForm& form, const StateData& sigma) {
    AlickiInvariants r;
    const auto& ts = form.terms;
    Matrix si = sigma.power(-1.0);
    for (size_t j = 0; j < ts.size(); ++j) {
        r.traceless = std::max(r.traceless, std::abs(ts[j].v.trace()));
        for (size_t k = 0; k < ts.size(); ++k) {
            cd ip = (ts[j].v.adjoint() * ts[k].v).trace();
            r.orthonormal = std::max(r.orthonormal, std::abs(ip - cd(j == k ? 1.0 : 0.0)));
        }
        const auto& p = ts[static_cast<size_t>(form.pairing[j])];
        r.pairing = std::max({r.pairing, (p.v - ts[j].v.adjoint()).norm(), std::abs(p.omega + ts[j].omega), std::abs(p.c - ts[j].c)});
        r.eigen = std::max(r.eigen, (sigma.sigma() * ts[j].v * si - std::exp(-ts[j].omega) * ts[j].v).norm());
    }
    return r;
}

}  // namespace qms
