// ceform.hpp — symmetric Christensen–Evans form L = ½{Φ(1),·} − Φ and the Alicki decomposition
#pragma once

#include "qms/bimodule.hpp"
#include "qms/superop.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qms {

// Φ(x) = 2(ξ|xξ) on the algebra, extended to M_n through the trace-preserving
// projection onto the algebra.  StageError unless ξ is fully invariant.
SuperOp phi_from_xi(const BimoduleRep& rep, const XiVector& xi);

// max over basis x of ‖L(x) − ((ξ|ξ)x + x(ξ|ξ) − 2(ξ|xξ))‖_F.
double ce_identity_check(const QMSGenerator& l, const BimoduleRep& rep, const XiVector& xi);

// Full pipeline  ξ″ → ξ′ → ξ → Φ.
struct CEResult {
    BimoduleRep rep;
    XiVector xi_raw, xi_vt, xi;
    SuperOp phi;
    Matrix k;                   // ½Φ(1) = (ξ|ξ)
    double ce_residual = 0.0;   // ce_identity_check
};
CEResult ce_pipeline(const QMSGenerator& l, const StateData& sigma);

// L = ½{Φ(1),·} − Φ restricted to `algebra` (full M_n by default).  Throws
// NotCP / NotSymmetric on bad input; verifies L(1)=0, CND and GNS-symmetry.
QMSGenerator generator_from_phi(const SuperOp& phi, const StateData& sigma);
QMSGenerator generator_from_phi(const SuperOp& phi, const StateData& sigma, const MatAlgebra& algebra);

// Random GNS-symmetric CP map on M_n: Σ μ (e^{−ω/2} V*·V + e^{ω/2} V·V*) with
// V random Δ̂-eigenvectors (σVσ^{-1} = e^{−ω}V).
SuperOp random_symmetric_phi(const StateData& sigma, Rng& rng, int terms = 4);

struct AlickiTerm {
    double c = 0.0;
    double omega = 0.0;
    Matrix v;
};

struct BohrSector {
    double omega = 0.0;
    int dim = 0;   // dimension of the sector (traceless part for ω = 0)
    int rank = 0;  // number of jump operators found in it
};

struct AlickiForm {
    std::vector<AlickiTerm> terms;
    std::vector<int> pairing;            // j ↦ j*
    std::vector<BohrSector> sectors;     // every sector examined, ω descending
    std::vector<std::string> diagnostics;
};

// Decomposition of a GNS-symmetric generator on the full algebra M_n.
AlickiForm alicki_decompose(const QMSGenerator& l, const StateData& sigma, double tol = DEFAULT_TOL);

// L = Σ c_j (e^{−ω_j/2} v_j*[v_j,·] − e^{ω_j/2} [v_j,·] v_j*).
SuperOp alicki_rebuild(const AlickiForm& form, int n);
// The variant with second term e^{ω_j/2}[v_j*,·]v_j, kept only to document that
// it is not hermiticity-preserving for non-tracial states.
SuperOp alicki_rebuild_literal(const AlickiForm& form, int n);
// Φ(x) = Σ 2c_j e^{−ω_j/2} v_j* x v_j.
SuperOp alicki_phi(const AlickiForm& form, int n);

struct AlickiInvariants {
    double traceless = 0.0;      // max |tr v_j|
    double orthonormal = 0.0;    // max |tr(v_j* v_k) − δ_jk|
    double pairing = 0.0;        // max of ‖v_{j*} − v_j*‖, |ω_{j*} + ω_j|, |c_{j*} − c_j|
    double eigen = 0.0;          // max ‖σ v_j σ^{-1} − e^{−ω_j} v_j‖
    double max() const;
};
AlickiInvariants alicki_invariants(const AlickiForm& form, const StateData& sigma);

}  // namespace qms
