// bimodule.hpp — GNS bimodule of a symmetric generator: H = F⊙L², its Tomita-type structure, and the ξ stages
//
// Raw space: C^{d²} with index α·d+β standing for e_α ⊗ e_β ⊗ Ω, where e_α is
// the trace-orthonormal basis of the algebra.  The constraint subspace
// {Σ a_j⊗x_j : Σ a_j x_j = 0} is the kernel K of the multiplication map; H is
// the quotient of K by the null space of the form
//     ⟨a⊗x⊗Ω, b⊗y⊗Ω⟩ = −½ tr(σ x* L(a* b) y).
// Operators on H are  embed · (raw operator) · lift.
#pragma once

#include "qms/algebra.hpp"
#include "qms/modular.hpp"
#include "qms/superop.hpp"
#include "qms/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qms {

// An M-M correspondence realized on C^dim with orthonormal coordinates.
// `right` holds the correspondence right action η ↦ η·y; in L²(M,φ) this is
// right multiplication, so Ω·y = σ^{1/2} y σ^{-1/2} Ω.
struct Correspondence {
    MatAlgebra algebra;
    StateData state;
    int dim = 0;
    std::vector<Matrix> left;   // per algebra basis element
    std::vector<Matrix> right;  // per algebra basis element

    Matrix left_of(const Matrix& x) const;
    Matrix right_of(const Matrix& y) const;
    // L(ξ): L²(M,φ) → this space, Ωy ↦ ξ·y, in L² basis coordinates.
    Matrix left_bounded(const Vector& xi) const;
    // (ξ|ζ) ∈ M, determined by L(ξ)*L(ζ) = left multiplication by (ξ|ζ) on L².
    Matrix inner(const Vector& xi, const Vector& zeta) const;
};

// L²(M,φ) itself as a correspondence (coordinates c_α = tr(e_α* η)).
Correspondence l2_correspondence(const MatAlgebra& m, const StateData& sigma);
// Matrix of left multiplication by x on the algebra coordinates.
Matrix coord_left(const MatAlgebra& m, const Matrix& x);
// Matrix of right multiplication by y on the algebra coordinates.
Matrix coord_right(const MatAlgebra& m, const Matrix& y);

struct BimoduleRep : Correspondence {
    Matrix raw_gram;      // d² × d² form on the raw space
    Matrix kernel;        // d² × k, orthonormal basis of the constraint subspace
    Matrix embed;         // dim × d²
    Matrix lift;          // d² × dim, embed·lift = 1
    RVector gram_spectrum;  // eigenvalues of the form on the constraint subspace
    int borderline = 0;     // eigenvalues within a factor 100 of the cutoff
    std::vector<Matrix> module_right;  // per basis element: a⊗x ↦ a⊗x e_γ
    std::vector<Vector> delta_vecs;    // δ(e_α) ⊗ Ω
    Matrix ut_gen;        // hermitian A with U_t = exp(itA)
    Matrix jj;            // 𝒥h = jj · conj(h)

    int dim_h() const { return dim; }
    Matrix module_right_of(const Matrix& x) const;
    Vector delta_of(const Matrix& x) const;
    Matrix ut(double t) const;
    Vector jconj(const Vector& h) const { return jj * h.conjugate(); }
    // Raw vector (d²) → H.
    Vector embed_raw(const Vector& raw) const { return embed * raw; }
    // Implementation residual ‖(xξ − ξx)·c − δ(x)‖ stacked over the basis (c = 1 or i).
    double implementation_residual(const Vector& xi, cd factor = 1.0) const;
    // ‖δ‖ stacked over the basis.
    double delta_norm() const;
};

// Requires L GNS-symmetric (residual ≤ sym_tol·max(1,‖L‖)) and CND on the algebra.
// The state must be the restricted state, i.e. its density lies in the algebra.
BimoduleRep build_gns_bimodule(const MatAlgebra& m, const QMSGenerator& l, const StateData& sigma,
                               double sym_tol = 1e-8);

// (ξ|ζ).
Matrix mvalued_inner(const BimoduleRep& rep, const Vector& xi, const Vector& zeta);
// Independent evaluation directly from the raw form:
// (u|v) = −½ Σ conj(c_{αβ}) c'_{γδ} e_β* L(e_α* e_γ) e_δ on lifted coordinates.
Matrix mvalued_inner_raw(const BimoduleRep& rep, const SuperOp& l, const Vector& xi, const Vector& zeta);

struct XiVector {
    enum class Stage { Raw, VtInvariant, FullyInvariant };
    Vector vec;
    Stage stage = Stage::Raw;
    std::map<std::string, double> residuals;
};
std::string stage_name(XiVector::Stage s);

// Minimal-norm least-squares ξ″ with xξ″ − ξ″x = δ(x); ResidualTooLarge above 1e-9·‖δ‖.
XiVector solve_inner_vector(const BimoduleRep& rep);
// ξ′ = P₀ξ″, P₀ the kernel projection of the U_t generator.
XiVector vt_project(const BimoduleRep& rep, const XiVector& raw);
// ξ = (ξ′ − 𝒥ξ′)/(2i).  StageError unless ξ′ is V_t-invariant.
XiVector j_symmetrize(const BimoduleRep& rep, const XiVector& vt);

struct HaarEstimate {
    XiVector xi;
    double residual = 0.0;   // ‖δ_ξ̂ − δ‖ stacked over the basis
    double trend = 0.0;      // residual·√N (roughly constant under the N^{-1/2} law)
    int samples = 0;
};
// Monte-Carlo average (1/N)Σ u*δ(u) over Haar-random unitaries of the algebra.
HaarEstimate haar_inner_vector(const BimoduleRep& rep, int samples, std::uint64_t seed);

// Residuals of the Tomita-bimodule identities on H (items (a)–(e)) and the
// structural invariants of the representation.  Items (a)–(d) are relative to
// max(1, ‖right-hand side‖); the remaining entries are absolute.
struct TomitaReport {
    double gram_min_eig = 0.0;
    double delta_gamma = 0.0;       // ⟨δ(x)Ω, δ(y)Ω⟩ = φ(Γ(x,y))
    double actions_commute = 0.0;   // [left(x), right(y)]
    double ut_unitary = 0.0;
    double j_antiunitary = 0.0;
    double j_involution = 0.0;
    double item_a = 0.0;            // U_t δ(x)Ω = δ(σ_t(x))Ω
    double item_b = 0.0;            // U_t left/right(x) U_{-t} = left/right(σ_t(x))
    double item_c = 0.0;            // 𝒥 δ(x)Ω = δ(σ_{i/2}(x)*)Ω
    double item_d = 0.0;            // 𝒥(xηy) = y*(𝒥η)x*
    double item_e = 0.0;            // 𝒥U_t = U_t𝒥
    double max_item() const;
};
TomitaReport tomita_check(const BimoduleRep& rep, const QMSGenerator& l,
                          const std::vector<double>& t_grid = {-2.7, -1.0, -0.3, 0.3, 1.0, 2.7});

}  // namespace qms
