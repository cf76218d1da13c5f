// algebra.hpp — unital *-subalgebras of M_n, Wedderburn blocks, state-preserving conditional expectations
#pragma once

#include "qms/types.hpp"

#include <cstdint>
#include <vector>

namespace qms {

class StateData;
class SuperOp;

// One Wedderburn summand M_{dim} ⊗ 1_{mult}.  The isometry W (n × dim·mult)
// satisfies  x = Σ_i W_i (X_i ⊗ 1_{mult_i}) W_i*  for every x in the algebra,
// with column index a·mult + r.
struct Block {
    int dim = 0;
    int mult = 0;
    Matrix isometry;
};

class MatAlgebra {
public:
    MatAlgebra() = default;

    int ambient_dim() const { return n_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<Matrix>& basis() const { return basis_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    bool is_full() const { return dim() == n_ * n_; }

    // Coordinates in the trace-orthonormal basis: c_α = tr(e_α* x).
    Vector coords(const Matrix& x) const;
    Matrix from_coords(const Vector& c) const;
    // Hilbert–Schmidt orthogonal projection onto the algebra.
    Matrix project(const Matrix& x) const { return from_coords(coords(x)); }
    // ‖x − project(x)‖_F.
    double membership_residual(const Matrix& x) const;
    // n² × d matrix whose columns are vec(e_α).
    const Matrix& basis_matrix() const { return bmat_; }

    // Block signature as (dim, mult) pairs, sorted.
    std::vector<std::pair<int, int>> signature() const;
    // max_α ‖Σ_i W_i(W_i* e_α W_i ⊗-compressed)W_i* − e_α‖ — block reconstruction residual.
    double reconstruction_residual() const;
    // Closure residual: products and adjoints of basis elements projected back.
    double closure_residual() const;

    // Builds the algebra from an already trace-orthonormal basis of a unital
    // *-algebra and computes its blocks.
    static MatAlgebra from_orthonormal(int n, std::vector<Matrix> basis, std::uint64_t seed = 0x5eedULL);

private:
    int n_ = 0;
    std::vector<Matrix> basis_;
    std::vector<Block> blocks_;
    Matrix bmat_;
};

// Smallest unital *-subalgebra containing gens.  Blocks come from a seeded
// random hermitian element of the center.
MatAlgebra algebra_from_generators(const std::vector<Matrix>& gens, std::uint64_t seed = 0x5eedULL);
// Algebra spanned by the given matrices; throws NotAnAlgebra unless the span is
// a unital *-algebra.
MatAlgebra algebra_from_basis(const std::vector<Matrix>& spanning, std::uint64_t seed = 0x5eedULL);

MatAlgebra full_algebra(int n);
MatAlgebra diagonal_algebra(int n);
// Block-diagonal algebra ⊕ M_{sizes[i]} on C^{Σ sizes}.
MatAlgebra block_diagonal_algebra(const std::vector<int>& sizes);

// Haar-random unitary of the algebra, sampled blockwise through the isometries.
Matrix haar_unitary_in(const MatAlgebra& m, Rng& rng);

struct CondExpectation {
    MatAlgebra source;
    MatAlgebra target;
    Matrix map;  // n² × n² superoperator matrix
    double modular_residual = 0.0;
};

struct CondExpectationReport {
    double unital = 0.0;
    double cp_min_eig = 0.0;  // min eigenvalue of the Choi matrix (scaled by ‖C‖_F)
    double idempotent = 0.0;
    double bimodule = 0.0;
    double state_preserving = 0.0;
    double gns_selfadjoint = 0.0;
};

// GNS-orthogonal projection of M onto N for the state σ (given on the ambient
// M_n).  Throws ModularInvarianceViolated when Δ̂ does not commute with the
// projection.
CondExpectation conditional_expectation(const MatAlgebra& m, const MatAlgebra& n, const StateData& sigma,
                                        double tol = DEFAULT_TOL);
CondExpectationReport check_cond_expectation(const CondExpectation& e, const StateData& sigma);

}  // namespace qms
