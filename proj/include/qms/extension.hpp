// extension.hpp — lifting GNS-symmetric generators from a subalgebra N ⊆ M, and classical Markov chains
#pragma once

#include "qms/algebra.hpp"
#include "qms/ceform.hpp"
#include "qms/superop.hpp"

#include <map>
#include <string>
#include <vector>

namespace qms {

// Continuous-time chain on {0,…,size−1}: L f(x) = Σ_y Q(x,y)(f(x) − f(y)).
struct ChainSpec {
    RVector m;          // reference distribution, full support
    RMatrix q;          // nonnegative rates, zero diagonal
    bool symmetric = true;  // demand Q(x,y)m(x) = Q(y,x)m(y)

    int size() const { return static_cast<int>(m.size()); }
    double reversibility_residual() const;  // max |Q(x,y)m(x) − Q(y,x)m(y)|
    // FaithfulnessViolated (m), NotAGenerator (Q), NotSymmetric (reversibility, 1e-12).
    void validate() const;
    StateData state() const { return StateData(Matrix(m.cast<cd>().asDiagonal())); }
};

// Generator on the diagonal algebra of M_n with state diag(m).
QMSGenerator chain_to_generator(const ChainSpec& c);

// The closed-form extension to M_n:
//   L̂(A) = Σ_{j,k} Q(j,k) ((E_jj A + A E_jj)/2 − A_kk E_jj).
SuperOp chain_extension_formula(const ChainSpec& c);

struct Extension {
    QMSGenerator generator;     // L̂ on M
    CEResult ce;                // pipeline run on N
    CondExpectation expectation;
    Matrix k;                   // ½Φ(1)
    std::map<std::string, double> residuals;
};

// L̂(x) = kx + xk − Φ(E(x)), k = ½Φ(1), with Φ from the symmetric CE form on N
// and E the σ̂-preserving conditional expectation M → N.
// Throws ModularInvarianceViolated or StateMismatch (restricted state off by > 1e-10).
Extension extend(const QMSGenerator& l, const MatAlgebra& m, const StateData& sigma_hat);
QMSGenerator extend_generator(const QMSGenerator& l, const MatAlgebra& m, const StateData& sigma_hat);

struct RestrictReport {
    double generator = 0.0;   // max over N-basis of ‖L̂(x) − L(x)‖_F
    double semigroup = 0.0;   // max over t and N-basis of ‖E(P̂_t x) − P_t x‖_F
    double commutes = 0.0;    // max over t and random x ∈ M of ‖E P̂_t x − P_t E x‖_F
    double max() const { return std::max({generator, semigroup, commutes}); }
};
RestrictReport restrict_check(const QMSGenerator& l_hat, const QMSGenerator& l, const CondExpectation& e,
                              const std::vector<double>& t_grid = {0.1, 1.0}, std::uint64_t seed = 7);

}  // namespace qms
