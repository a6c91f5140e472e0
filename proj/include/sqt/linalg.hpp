#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace sqt {

using Complex       = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector    = Eigen::VectorXd;
using Rng           = std::mt19937_64;
using Dims          = std::vector<std::size_t>;

namespace tol {
inline constexpr double norm        = 1e-12; // state normalization, probability sums
inline constexpr double unitary     = 1e-10; // ||U^dag U - I||_max
inline constexpr double orthonormal = 1e-10;
inline constexpr double zero_weight = 1e-12; // Schmidt weights / mixture members below this are dropped
inline constexpr double degeneracy  = 1e-9;  // |w_i - w_j| <= this counts as equal
} // namespace tol

// Product of the dimensions; throws StateTooLarge if it does not fit in memory-sized indexing.
std::size_t total_dim(const Dims &dims);

// Normalized pure state on a tensor product of finite-dimensional factors.
// Amplitudes are stored in row-major multi-index order: the last factor varies fastest.
class StateVector {
  public:
    // Throws InvalidInput unless |amplitudes| has the product length and unit norm (1e-12).
    StateVector(Dims factor_dims, ComplexVector amplitudes);

    // Rescales the amplitudes to unit norm. Throws InvalidInput on a zero vector.
    static StateVector normalized(Dims factor_dims, ComplexVector amplitudes);
    static StateVector basis(Dims factor_dims, std::size_t index);

    const Dims &factor_dims() const { return factor_dims_; }
    const ComplexVector &amplitudes() const { return amplitudes_; }
    std::size_t factor_count() const { return factor_dims_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }

  private:
    Dims factor_dims_;
    ComplexVector amplitudes_;
};

// Von Neumann normal form sum_l sqrt(w_l) left_l (x) right_l of a bipartite state.
struct SchmidtForm {
    std::size_t dim_left  = 0;
    std::size_t dim_right = 0;
    std::vector<double> weights; // descending
    ComplexMatrix left;          // dim_left x rank, orthonormal columns
    ComplexMatrix right;         // dim_right x rank, orthonormal columns

    std::size_t rank() const { return weights.size(); }
    ComplexVector reconstruct() const;
};

double max_abs(const ComplexMatrix &m);
bool is_unitary(const ComplexMatrix &u, double tolerance = tol::unitary);
// ||Q^dag Q - I||_max for a matrix with (supposedly) orthonormal columns.
double orthonormality_error(const ComplexMatrix &q);

StateVector tensor(const StateVector &a, const StateVector &b);

// Haar-distributed unitary: QR of a complex Ginibre matrix, with R's diagonal phases folded into Q.
ComplexMatrix haar_unitary(std::size_t dim, Rng &rng);
ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed);

// Throws NotBipartite unless the state has exactly two factors.
SchmidtForm schmidt(const StateVector &state);

// Throws DimensionMismatch if u is not dim x dim.
StateVector apply_unitary(const StateVector &state, const ComplexMatrix &u);

// Applies m (d_k x d_k) to tensor factor k of a raw amplitude vector.
ComplexVector apply_local(const ComplexVector &amplitudes, const Dims &dims, std::size_t factor,
                          const ComplexMatrix &m);

// Applies u (d_i d_j x d_i d_j, factor i's index major) to the ordered factor pair (i, j), i != j.
ComplexVector apply_two_site(const ComplexVector &amplitudes, const Dims &dims, std::size_t i,
                             std::size_t j, const ComplexMatrix &u);

// Regroups the factors into (left_factors | the rest, in original order) as a two-factor state.
StateVector bipartition(const StateVector &state, const std::vector<std::size_t> &left_factors);

// Extends orthonormal columns (dim x r) to a full orthonormal basis whose first r columns are exactly
// the given ones. The completion is drawn from rng.
ComplexMatrix complete_basis(const ComplexMatrix &columns, std::size_t dim, Rng &rng);

ComplexVector random_unit_vector(std::size_t dim, Rng &rng);
StateVector random_state(const Dims &dims, Rng &rng);
StateVector random_product_state(const Dims &dims, Rng &rng);

} // namespace sqt
