// groupalg.hpp — finite group algebras L(G) ⊆ M_|G| with conditionally negative definite lengths
#pragma once

#include "qms/bimodule.hpp"
#include "qms/superop.hpp"

#include <string>
#include <vector>

namespace qms {

struct GroupSpec {
    std::string name;
    std::vector<std::vector<int>> cayley;  // cayley[g][h] = gh
    std::vector<int> inv;
    RVector ell;

    int order() const { return static_cast<int>(cayley.size()); }
    int identity() const;
    // Group axioms, ℓ(e)=0, ℓ(g⁻¹)=ℓ(g), ℓ ≥ 0.  Throws NotAGenerator / DimensionMismatch.
    void validate() const;
    // K(g,h) = ½(ℓ(g) + ℓ(h) − ℓ(g⁻¹h)).
    RMatrix k_gram() const;
    // Smallest eigenvalue of K (scaled by max(1, ‖K‖)); ℓ is CND iff this is ≥ −1e-12.
    double cnd_margin() const;
};

// Cayley table from a multiplication rule on {0,…,n−1}; inverses are derived.
GroupSpec group_from_table(std::string name, std::vector<std::vector<int>> cayley, RVector ell);
// ℤ/n with ℓ(k) = |1 − e^{2πik/n}|².
GroupSpec cyclic_group(int n);
// ℤ/n with a given length (size n).
GroupSpec cyclic_group(int n, const RVector& ell);
// S₃ and D₄ with the word length for their Coxeter generators.
GroupSpec symmetric_group_s3();
GroupSpec dihedral_group_d4();
// Word length for the given generating set (closed under inverses by the routine).
RVector word_length(const GroupSpec& g, const std::vector<int>& gens);

// λ_g e_h = e_{gh}.
Matrix left_regular(const GroupSpec& g, int elem);
// L(G) with basis λ_g/√|G| (in group order).
MatAlgebra group_algebra(const GroupSpec& g);
StateData group_trace(const GroupSpec& g);  // τ: density 1/|G|

// L(λ_g) = ℓ(g)λ_g on L(G).  Throws NotCND when K is not positive semidefinite.
QMSGenerator group_generator(const GroupSpec& g);

struct Cocycle {
    int dim = 0;
    RMatrix b;                 // column g is b(g)
    std::vector<RMatrix> pi;   // π(g)
    double cocycle_residual = 0.0;   // max ‖b(gh) − b(g) − π(g)b(h)‖
    double length_residual = 0.0;    // max |‖b(g) − b(h)‖² − ℓ(g⁻¹h)|
    double orthogonal_residual = 0.0;  // max ‖π(g)ᵀπ(g) − 1‖
    double homomorphism_residual = 0.0;  // max ‖π(gh) − π(g)π(h)‖
    double max() const;
};
Cocycle cocycle_from_length(const GroupSpec& g);

struct GroupXiReport {
    Vector xi;                       // the explicit vector (i/|G|)Σ δ(λ_g)λ_{g⁻¹} in H
    int dim_h = 0;
    double delta_implementation = 0.0;  // max_g ‖δ_{iξ}(λ_g) − δ(λ_g)‖ (stacked)
    double j_fixed = 0.0;               // ‖𝒥ξ − ξ‖
    double ce_identity = 0.0;           // max_g ‖(ξ|ξ)λ_g + λ_g(ξ|ξ) − 2(ξ|λ_gξ) − ℓ(g)λ_g‖
    double ksum = 0.0;                  // max_g ‖(ξ|λ_gξ) − ((1/|G|²)ΣK − ½ℓ(g))λ_g‖
    double ksum_terms = 0.0;            // max_g |(1/|G|)Σ_h K(h,g) − ½ℓ(g)|
    double max() const;
};
// Builds the bimodule of group_generator(g) and checks the explicit ξ.
GroupXiReport group_xi_check(const GroupSpec& g);
// Same, on an already built representation.
GroupXiReport group_xi_check(const GroupSpec& g, const BimoduleRep& rep);
// The explicit ξ as an element of H.
Vector group_xi(const GroupSpec& g, const BimoduleRep& rep);

}  // namespace qms
