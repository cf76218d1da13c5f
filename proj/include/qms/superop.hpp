// superop.hpp — linear maps on M_n: Choi matrices, CP tests, GNS adjoints, CND verdicts, semigroups
//
// Convention: column-stacking vectorization, vec(AXB) = (Bᵀ ⊗ A) vec(X).
// Worked 2×2 example: for X = [[x11,x12],[x21,x22]], vec(X) = (x11,x21,x12,x22),
// and the map X ↦ E12·X (A = E12, B = 1) has matrix 1 ⊗ E12, sending
// vec(X) to (x21,0,x22,0) = vec([[x21,x22],[0,0]]).
#pragma once

#include "qms/algebra.hpp"
#include "qms/modular.hpp"
#include "qms/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qms {

class SuperOp {
public:
    SuperOp() : SuperOp(Matrix::Zero(0, 0)) {}
    explicit SuperOp(Matrix mat);

    int dim() const { return n_; }
    const Matrix& mat() const { return mat_; }
    Matrix operator()(const Matrix& x) const;

    SuperOp operator*(const SuperOp& o) const;  // composition (this ∘ o)
    SuperOp operator+(const SuperOp& o) const;
    SuperOp operator-(const SuperOp& o) const;
    SuperOp operator*(cd c) const;
    double norm() const { return mat_.norm(); }

    // Cached property residuals (computed once, thread-safe).
    double unital_residual() const;        // ‖S(1) − 1‖_F
    double hermiticity_residual() const;   // max-type residual of S(x*) = S(x)*
    double choi_min_eig() const;           // min eigenvalue of choi(S) divided by ‖choi(S)‖_F (0 if S = 0)
    bool is_cp(double tol = 1e-10) const { return choi_min_eig() >= -tol; }

private:
    struct Cache;
    Matrix mat_;
    int n_ = 0;
    std::shared_ptr<Cache> cache_;
};

// Standard maps.
SuperOp identity_map(int n);
SuperOp zero_map(int n);
SuperOp sandwich(const Matrix& a, const Matrix& b);  // x ↦ a x b
SuperOp left_mult(const Matrix& a);                  // x ↦ a x
SuperOp right_mult(const Matrix& b);                 // x ↦ x b
SuperOp transpose_map(int n);                        // x ↦ xᵀ
SuperOp trace_map(int n);                            // x ↦ tr(x)/n · 1
SuperOp from_kraus(const std::vector<Matrix>& ops);  // x ↦ Σ V* x V
// L(x) = ½{Φ(1),x} − Φ(x) for the Kraus map Φ.
SuperOp generator_from_kraus(const std::vector<Matrix>& ops);
// L(x) = −(i[h,x] + Σ (J* x J − ½{J*J, x})).
SuperOp hamiltonian_jump(const Matrix& h, const std::vector<Matrix>& jumps);

// C = Σ_{jk} E_jk ⊗ S(E_jk).
Matrix choi(const SuperOp& s);

// GNS adjoint: tr(σ S(x)* y) = tr(σ x* S†(y)).  S† = G⁻¹ S^H G with G = σᵀ ⊗ 1.
SuperOp gns_adjoint(const SuperOp& s, const StateData& sigma);
double gns_symmetric_check(const SuperOp& s, const StateData& sigma);  // ‖S − S†‖_F
const std::vector<double>& default_t_grid();
double modular_commutation_check(const SuperOp& s, const StateData& sigma,
                                 const std::vector<double>& t_grid = default_t_grid());

// Versions restricted to a subalgebra A ⊆ M_n (S assumed to map A into A).
Matrix restricted_matrix(const SuperOp& s, const MatAlgebra& a);  // [tr(e_α* S(e_β))]
double gns_symmetric_check_on(const SuperOp& s, const StateData& sigma, const MatAlgebra& a);
double modular_commutation_check_on(const SuperOp& s, const StateData& sigma, const MatAlgebra& a,
                                    const std::vector<double>& t_grid = default_t_grid());

// L² pictures: GNS  A = xΩ ↦ S(x)Ω,  KMS  A = σ^{1/4}xσ^{1/4} ↦ σ^{1/4}S(x)σ^{1/4}.
Matrix gns_l2_matrix(const SuperOp& s, const StateData& sigma);
Matrix kms_l2_matrix(const SuperOp& s, const StateData& sigma);

struct QMSGenerator {
    SuperOp op;
    MatAlgebra algebra;
    std::optional<StateData> state;

    int dim() const { return op.dim(); }
    Matrix operator()(const Matrix& x) const { return op(x); }
    // Throws NotAGenerator unless L(1)=0 and L is hermiticity-preserving (scaled by max(1,‖L‖)).
    void validate(double tol = 1e-10) const;
};

QMSGenerator make_generator(const SuperOp& op, std::optional<StateData> state = std::nullopt);
QMSGenerator make_generator(const SuperOp& op, const MatAlgebra& algebra, std::optional<StateData> state);

struct CndVerdict {
    enum class Status { CND, NotCND, NotAGenerator };
    Status status = Status::CND;
    double min_eig = 0.0;   // smallest eigenvalue of the compressed form (scaled)
    std::string failing;    // name of the failing precondition flag, if any
    bool cnd() const { return status == Status::CND; }
};

// Raw form on A ⊗ A: G[(αβ),(γδ)] = −½ tr(ρ e_β* L(e_α* e_γ) e_δ), index α·d+β.
Matrix b_form_gram(const SuperOp& l, const MatAlgebra& a, const Matrix& rho);
// Orthonormal basis (columns) of the kernel of Σ c_{αβ} e_α⊗e_β ↦ Σ c_{αβ} e_α e_β.
Matrix multiplication_kernel(const MatAlgebra& a);

// Choi criterion on M_n: P⊥ choi(−L) P⊥ ⪰ −tol·‖·‖_F, P the projector onto vec(1).
CndVerdict cnd_check(const SuperOp& l, double tol = 1e-10);
// On a subalgebra: the tracial form −½ tr(x_j* L(a_j* a_k) x_k) is PSD on the
// kernel of the multiplication map (equivalent to conditional negative definiteness).
CndVerdict cnd_check_on(const SuperOp& l, const MatAlgebra& a, double tol = 1e-10);
// Dispatches on whether the generator's algebra is all of M_n.
CndVerdict cnd_check(const QMSGenerator& l, double tol = 1e-10);

SuperOp semigroup(const SuperOp& l, double t);  // exp(−tL)
inline SuperOp semigroup(const QMSGenerator& l, double t) { return semigroup(l.op, t); }

struct MarkovFlags {
    double cp_min_eig = 0.0;
    double unital = 0.0;
    bool markov(double tol = 1e-9) const { return cp_min_eig >= -tol && unital <= tol; }
};
MarkovFlags markov_check(const SuperOp& s);

// Γ(x,y) = ½(L(x)* y + x* L(y) − L(x* y)).
Matrix carre_du_champ(const SuperOp& l, const Matrix& x, const Matrix& y);
inline Matrix carre_du_champ(const QMSGenerator& l, const Matrix& x, const Matrix& y) {
    return carre_du_champ(l.op, x, y);
}

}  // namespace qms
