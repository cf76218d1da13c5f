// types.hpp — matrix aliases, the error hierarchy and small dense linear-algebra helpers
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qms {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

inline constexpr cd I_UNIT{0.0, 1.0};

// Default absolute tolerance on scaled residuals.
inline constexpr double DEFAULT_TOL = 1e-9;

// ---------------------------------------------------------------------------
// Errors.  Every error carries a stable name (used by the CLI report) and a
// category: precondition violations vs. numerical failures.

class Error : public std::runtime_error {
public:
    enum class Kind { Precondition, Numerical };
    Error(std::string name, const std::string& msg, Kind kind)
        : std::runtime_error(name + ": " + msg), name_(std::move(name)), kind_(kind) {}
    const std::string& name() const noexcept { return name_; }
    Kind kind() const noexcept { return kind_; }

private:
    std::string name_;
    Kind kind_;
};

#define QMS_DEFINE_ERROR(Cls, KindV)                                        \
    class Cls : public Error {                                              \
    public:                                                                 \
        explicit Cls(const std::string& msg) : Error(#Cls, msg, KindV) {}   \
    };

QMS_DEFINE_ERROR(DimensionMismatch, Kind::Precondition)
QMS_DEFINE_ERROR(ModularInvarianceViolated, Kind::Precondition)
QMS_DEFINE_ERROR(FaithfulnessViolated, Kind::Precondition)
QMS_DEFINE_ERROR(NotAGenerator, Kind::Precondition)
QMS_DEFINE_ERROR(NotSymmetric, Kind::Precondition)
QMS_DEFINE_ERROR(NotCND, Kind::Precondition)
QMS_DEFINE_ERROR(NotCP, Kind::Precondition)
QMS_DEFINE_ERROR(NotDBC, Kind::Precondition)
QMS_DEFINE_ERROR(NonFullAlgebra, Kind::Precondition)
QMS_DEFINE_ERROR(StateMismatch, Kind::Precondition)
QMS_DEFINE_ERROR(StageError, Kind::Precondition)
QMS_DEFINE_ERROR(NotAnAlgebra, Kind::Precondition)
QMS_DEFINE_ERROR(ResidualTooLarge, Kind::Numerical)
QMS_DEFINE_ERROR(NumericalBreakdown, Kind::Numerical)

#undef QMS_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Vectorization: column stacking, vec(AXB) = (B^T ⊗ A) vec(X).

inline Vector vec(const Matrix& x) {
    return Eigen::Map<const Vector>(x.data(), x.size());
}

inline Matrix unvec(const Vector& v, int n) {
    if (v.size() != static_cast<Eigen::Index>(n) * n)
        throw DimensionMismatch("unvec: vector length is not n^2");
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

Matrix kron(const Matrix& a, const Matrix& b);

inline double fro(const Matrix& x) { return x.norm(); }

inline Matrix matrix_unit(int n, int j, int k) {
    Matrix e = Matrix::Zero(n, n);
    e(j, k) = 1.0;
    return e;
}

inline Matrix hermitian_part(const Matrix& x) { return 0.5 * (x + x.adjoint()); }

// Smallest eigenvalue of the hermitian part.
double min_eig_herm(const Matrix& x);

// Eigen-decomposition of a hermitian matrix (ascending eigenvalues).
struct HermEig {
    RVector values;
    Matrix vectors;
};
HermEig eig_herm(const Matrix& x);

// f(x) for hermitian x via spectral calculus.
template <class F>
Matrix herm_func(const Matrix& x, F&& f) {
    HermEig e = eig_herm(x);
    Vector d(e.values.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = f(e.values(i));
    return e.vectors * d.asDiagonal() * e.vectors.adjoint();
}

// Orthonormal basis of the column span (rank decided at rel_cut·σ_max).
Matrix range_basis(const Matrix& a, double rel_cut = 1e-12);
// Orthonormal basis of the null space (columns), rank decided at rel_cut·σ_max.
Matrix null_basis(const Matrix& a, double rel_cut = 1e-12);
// Minimal-norm least-squares solution.
Matrix lstsq(const Matrix& a, const Matrix& b, double rel_cut = 1e-12);
// Moore–Penrose pseudo-inverse.
Matrix pinv(const Matrix& a, double rel_cut = 1e-12);

// exp(m) — eigendecomposition when the eigenvector condition number is
// at most 1e8, otherwise scaling-and-squaring Padé.
// Throws NumericalBreakdown when the result is not finite.
Matrix expm(const Matrix& m);

// Random helpers (seeded by the caller).
Matrix ginibre(int n, Rng& rng);
Matrix random_hermitian(int n, Rng& rng);
Matrix haar_unitary(int n, Rng& rng);

}  // namespace qms
