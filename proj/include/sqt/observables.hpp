#pragma once

#include "sqt/linalg.hpp"
#include "sqt/schemes.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sqt {

namespace tol {
inline constexpr double commutator = 1e-9;
inline constexpr double subspace   = 1e-9;
inline constexpr double eigen_gap  = 1e-9; // eigenvalues closer than this share an eigenspace
} // namespace tol

// Self-adjoint operator with pure point spectrum: eigenvalue i belongs to eigenbasis column i.
class PointObservable {
  public:
    // Throws InvalidInput unless the basis is square, matches the eigenvalue count and is orthonormal (1e-10).
    PointObservable(RealVector eigenvalues, ComplexMatrix eigenbasis);

    static PointObservable identity(std::size_t dim);
    // Eigenvalues 1, 2, ..., dim assigned to the basis columns in order.
    static PointObservable from_basis(ComplexMatrix basis);
    static PointObservable from_hermitian(const ComplexMatrix &h);

    std::size_t dim() const { return static_cast<std::size_t>(eigenvalues_.size()); }
    const RealVector &eigenvalues() const { return eigenvalues_; }
    const ComplexMatrix &eigenbasis() const { return eigenbasis_; }

    // Every eigenvalue is separated from all others by more than 1e-9.
    bool is_simple() const { return simple_; }

    // Column indices of each eigenspace, ordered by ascending eigenvalue.
    const std::vector<std::vector<std::size_t>> &eigenspaces() const { return eigenspaces_; }

    ComplexMatrix matrix() const;
    ComplexMatrix projector(std::size_t eigenspace) const;

  private:
    RealVector eigenvalues_;
    ComplexMatrix eigenbasis_;
    std::vector<std::vector<std::size_t>> eigenspaces_;
    bool simple_ = true;
};

// A^(1) (x) ... (x) A^(n), one observable per tensor factor.
struct ProductObservable {
    std::vector<PointObservable> factors;

    static ProductObservable identity(const Dims &dims);

    Dims dims() const;
    // Membership in the set of simple actual observables: every factor simple.
    bool is_simple() const;
};

struct MixtureComponent {
    double probability;
    StateVector state;
};

// Coefficients of the state in the joint eigenbasis, row-major in the factor indices.
ComplexVector product_basis_coefficients(const StateVector &state, const ProductObservable &obs);

// One event per tuple of factor eigenspaces (one per joint eigenvector when all factors are simple).
// Throws DimensionMismatch if the observable does not fit the state's factors.
Scheme measurement_scheme(const StateVector &state, const ProductObservable &obs);

// Entropy of the measurement scheme.
double s_tilde(const StateVector &state, const ProductObservable &obs);

// The mixture the measurement turns the state into. Members with probability < 1e-12 are dropped.
std::vector<MixtureComponent> induced_mixture(const StateVector &state, const ProductObservable &obs);

// a is finer than b: they commute and each eigenspace of b is a sum of eigenspaces of a.
bool is_finer_op(const PointObservable &a, const PointObservable &b);

// Haar-random eigenbasis with eigenvalues 1..dim.
PointObservable random_simple_observable(std::size_t dim, Rng &rng);

// Simple observable finer than a. Degenerate eigenspaces get a seeded random orthonormal basis and
// eigenvalues are relabelled 1..dim in ascending order. Simple input is returned unchanged.
PointObservable refine_to_simple(const PointObservable &a, std::uint64_t seed);

} // namespace sqt
