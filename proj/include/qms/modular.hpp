// modular.hpp — faithful states and the modular apparatus in the Hilbert–Schmidt model
//
// L²(M,φ) is realized as n×n matrices with ⟨A,B⟩ = tr(A*B), cyclic vector
// Ω = σ^{1/2}, left/right actions by matrix multiplication, J(A) = A* and
// Δ̂(A) = σAσ^{-1}.
#pragma once

#include "qms/types.hpp"

namespace qms {

class SuperOp;

class StateData {
public:
    StateData() = default;
    // Validates hermiticity, trace one (1e-12) and faithfulness (eigenvalues > 1e-14).
    explicit StateData(const Matrix& sigma);

    static StateData tracial(int n) { return StateData(Matrix::Identity(n, n) / double(n)); }

    int dim() const { return static_cast<int>(sigma_.rows()); }
    const Matrix& sigma() const { return sigma_; }
    const RVector& eigenvalues() const { return evals_; }
    const Matrix& eigenvectors() const { return evecs_; }
    const Matrix& omega() const { return omega_; }  // σ^{1/2}
    const Matrix& log_sigma() const { return log_; }

    // σ^p for real p.
    Matrix power(double p) const;
    // σ^{w} = exp(w log σ) for complex w.
    Matrix cpower(cd w) const;
    // Spread of the log-eigenvalues, max ln λ − min ln λ.
    double log_spread() const;

private:
    Matrix sigma_, evecs_, omega_, log_;
    RVector evals_;
};

// x ↦ σ^{it} x σ^{-it}.
SuperOp modular_group(const StateData& s, double t);
// x ↦ σ^{iz} x σ^{-iz}; at z = i/2 this is x ↦ σ^{-1/2} x σ^{1/2}.
// Throws NumericalBreakdown if the result would overflow the double range.
SuperOp analytic_continuation(const StateData& s, cd z);
// Matrix form of σ_z(x) without building the superoperator.
Matrix sigma_z(const StateData& s, cd z, const Matrix& x);
// True when |Im z|·spread(ln σ) exceeds 700 (exp range warning).
bool continuation_overflow_risk(const StateData& s, cd z);

// Δ̂ : x ↦ σ x σ^{-1}.
SuperOp modular_operator(const StateData& s);

cd gns_inner(const StateData& s, const Matrix& x, const Matrix& y);  // tr(σ x* y)
cd kms_inner(const StateData& s, const Matrix& x, const Matrix& y);  // tr(σ^{1/2} x* σ^{1/2} y)
double centralizer_check(const StateData& s, const Matrix& x);       // ‖[σ,x]‖_F

}  // namespace qms

// Superoperator calculus is needed by every caller of the maps above.
#include "qms/superop.hpp"
