// test_fock.cpp — relative tensor products and the truncated Fock representation
#include <doctest.h>

#include "helpers.hpp"

using namespace qms;
using namespace qms::testing;

namespace {

struct Setup {
    QMSGenerator l;
    StateData s;
    BimoduleRep rep;
    XiVector xi;
};

Setup setup(const QMSGenerator& l, const StateData& s) {
    BimoduleRep rep = build_gns_bimodule(l.algebra, l, s);
    XiVector xi = j_symmetrize(rep, vt_project(rep, solve_inner_vector(rep)));
    return {l, s, rep, xi};
}

void check_report(const FockReport& r) {
    CHECK(r.s_hermitian <= 1e-9);
    CHECK(r.expectation_a <= 1e-9);
    CHECK(r.expectation_s <= 1e-9);
    CHECK(r.alpha_delta <= 1e-9);
    CHECK(r.alpha_bimodule <= 1e-9);
    CHECK(r.mvalued <= 1e-9);
    CHECK(r.gamma <= 1e-9);
    CHECK(r.centralizer <= 1e-9);
    CHECK(r.covariance <= 1e-9);
    CHECK(r.commutant <= 1e-9);
    CHECK(r.tensor_unit <= 1e-9);
    CHECK(r.left_bounded <= 1e-9);
}

}  // namespace

TEST_CASE("Fock representation of the two-state chain") {
    ChainSpec c = chain_example();
    Setup st = setup(chain_to_generator(c), c.state());
    FockRep f = build_fock(st.rep, st.xi);
    CHECK(f.dims[0] == 2);
    CHECK(f.dims[1] == st.rep.dim_h());
    CHECK(f.total == f.dims[0] + f.dims[1] + f.dims[2]);
    CHECK(f.expect(f.s_mat).norm() <= 1e-12);
    CHECK(std::abs(f.vacuum.norm() - 1.0) <= 1e-12);
    check_report(fock_check(f, st.l));
    CHECK(gamma_identity_check(f, st.l) <= 1e-9);
}

TEST_CASE("Fock representation of the extended chain on M_2 and of group algebras") {
    ChainSpec c = chain_example();
    QMSGenerator ext = make_generator(chain_extension_formula(c), full_algebra(2), c.state());
    Setup st = setup(ext, c.state());
    FockRep f = build_fock(st.rep, st.xi);
    check_report(fock_check(f, st.l));

    for (const GroupSpec& g : {cyclic_group(2), cyclic_group(3)}) {
        CAPTURE(g.name);
        Setup sg = setup(group_generator(g), group_trace(g));
        FockRep fg = build_fock(sg.rep, sg.xi);
        check_report(fock_check(fg, sg.l));
    }
}

TEST_CASE("zero vector gives the zero field") {
    ChainSpec c = chain_example();
    Setup st = setup(chain_to_generator(c), c.state());
    XiVector zero;
    zero.vec = Vector::Zero(st.rep.dim_h());
    zero.stage = XiVector::Stage::FullyInvariant;
    FockRep f = build_fock(st.rep, zero);
    CHECK(f.s_mat.norm() <= 1e-14);
}

TEST_CASE("build_fock preconditions") {
    ChainSpec c = chain_example();
    Setup st = setup(chain_to_generator(c), c.state());
    CHECK_THROWS_AS(build_fock(st.rep, st.xi, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_fock(st.rep, solve_inner_vector(st.rep)), StageError);
}

TEST_CASE("relative tensor products") {
    Rng rng(60);
    StateData s = random_state(2, rng);
    QMSGenerator l = random_dbc_generator(s, rng, 2);
    BimoduleRep rep = build_gns_bimodule(l.algebra, l, s);
    const int d = rep.dim_h();

    // Oracle: rank of B[(i,j),(k,l)] = ⟨f_j, (f_i|f_k) f_l⟩ assembled from the M-valued inner product.
    Matrix b(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            Matrix ik = rep.left_of(mvalued_inner(rep, Vector::Unit(d, i), Vector::Unit(d, k)));
            for (int j = 0; j < d; ++j)
                for (int m = 0; m < d; ++m) b(i * d + j, k * d + m) = ik(j, m);
        }
    HermEig e = eig_herm(hermitian_part(b));
    const double cut = 1e-10 * e.values.cwiseAbs().maxCoeff();
    RelTensor hh = rel_tensor(rep, rep);
    CHECK(hh.dim == static_cast<int>((e.values.array() > cut).count()));

    // H ⊗_φ L² ≅ H.
    Correspondence l2 = l2_correspondence(l.algebra, s);
    RelTensor hl = rel_tensor(rep, l2);
    CHECK(hl.dim == d);
    Vector u = Vector::Unit(d, 0), v = Vector::Unit(d, d - 1);
    Vector omega = l.algebra.coords(s.omega());  // Ω = σ^{1/2}
    CHECK(std::abs(hl.tensor(u, omega).dot(hl.tensor(v, omega)) - u.dot(v)) <= 1e-10);

    // Actions on the tensor product: left acts on the first leg, right on the second.
    Matrix x = random_matrix(2, rng), y = random_matrix(2, rng);
    Vector t = hh.tensor(rep.left_of(x) * u, rep.right_of(y) * v);
    CHECK((t - hh.left_of(x) * hh.right_of(y) * hh.tensor(u, v)).norm() <= 1e-9);
}
