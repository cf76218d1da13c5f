// fock.hpp — relative tensor products and the depth-2 truncated Fock space over a GNS bimodule
//
// Levels: 0 = L²(M,φ) (algebra coordinates), 1 = H, 2 = H ⊗_φ H.  Every
// identity checked here involves at most two creation/annihilation steps out of
// level 0, so the truncation is exact for them.  Cyclicity and separation of
// the vacuum are not certified.
#pragma once

#include "qms/bimodule.hpp"

#include <array>

namespace qms {

// Correspondence H1 ⊗_φ H2: completion of H1 ⊙ H2 for
//   B(ξ₁⊗η₁, ξ₂⊗η₂) = ⟨η₁, (ξ₁|ξ₂)·η₂⟩,
// raw index i·dim2 + j over the coordinate bases.
struct RelTensor : Correspondence {
    Matrix embed;         // dim × dim1·dim2
    Matrix lift;          // dim1·dim2 × dim
    RVector gram_spectrum;
    int dim1 = 0, dim2 = 0;
    // Class of u ⊗ v.
    Vector tensor(const Vector& u, const Vector& v) const;
};
RelTensor rel_tensor(const Correspondence& h1, const Correspondence& h2);

struct FockRep {
    BimoduleRep rep;
    Correspondence l2;
    RelTensor hh;
    Vector xi;
    std::array<int, 3> dims{};
    std::array<int, 3> offsets{};
    int total = 0;
    Matrix a_mat;   // creation operator a(η̂)
    Matrix s_mat;   // a + a*
    Vector vacuum;  // Ω at level 0

    // Creation operator for an arbitrary vector ζ ∈ H.
    Matrix creation(const Vector& zeta) const;
    // α(ζ) = a(ζ) + a(𝒥 e^{A/2} ζ)*, the self-adjoint-compatible lift with α(ξ) = s.
    Matrix alpha(const Vector& zeta) const;
    // Level-diagonal left action of x.
    Matrix left_of(const Matrix& x) const;
    // E(b) = L(Ω)* b L(Ω) as an element of M.
    Matrix expect(const Matrix& b) const;
    // E(b* c) using only the level-0 columns.
    Matrix expect_product(const Matrix& b, const Matrix& c) const;
    // Second quantization of the modular unitaries.
    Matrix ut(double t) const;
    // Commutant partner t(η̂) = b + b*, b the right creation operator.
    Matrix commutant_partner() const;
};

// StageError unless ξ is fully invariant; only depth 2 is supported.
FockRep build_fock(const BimoduleRep& rep, const XiVector& xi, int depth = 2);

// max over basis pairs of ‖Γ(x,y) − E([x,s]*[y,s])‖_F.
double gamma_identity_check(const FockRep& fock, const QMSGenerator& l);

struct FockReport {
    double s_hermitian = 0.0;      // ‖s − s*‖
    double expectation_a = 0.0;    // ‖E(a)‖
    double expectation_s = 0.0;    // ‖E(s)‖
    double alpha_delta = 0.0;      // max ‖α(δ(x)Ω) − i[x,s]‖
    double alpha_bimodule = 0.0;   // max ‖α(xξy) − x s y‖
    double mvalued = 0.0;          // max ‖E(α(ζ₁)*α(ζ₂)) − (ζ₁|ζ₂)‖
    double gamma = 0.0;            // gamma_identity_check
    double centralizer = 0.0;      // max |⟨Ω,(sb − bs)Ω⟩| over short words b
    double covariance = 0.0;       // Ũ_t s Ũ_t* = s and Ũ_t x Ũ_t* = σ_t(x)
    double commutant = 0.0;        // ‖[s,t]‖ on levels 0–1
    double tensor_unit = 0.0;      // H ⊗_φ L² ≅ H: dimension and inner products
    double left_bounded = 0.0;     // L(ξ⊗Ω)*L(ζ⊗Ω) = (ξ|ζ)
    double max() const;
};
FockReport fock_check(const FockRep& fock, const QMSGenerator& l,
                      const std::vector<double>& t_grid = {-1.0, 0.3, 2.7});

}  // namespace qms
