#include "sqt/linalg.hpp"

#include "sqt/errors.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>

namespace sqt {

namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Largest amplitude vector we are willing to index.
constexpr std::size_t max_amplitudes = std::size_t{1} << 30;

ComplexMatrix ginibre(std::size_t rows, std::size_t cols, Rng &rng) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ComplexMatrix z(rows, cols);
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
        for (Eigen::Index r = 0; r < z.rows(); ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            z(r, c)         = Complex(re, im);
        }
    }
    return z;
}

Dims strides_of(const Dims &dims) {
    Dims strides(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
    return strides;
}

} // namespace

std::size_t total_dim(const Dims &dims) {
    std::size_t n = 1;
    for (auto d : dims) {
        if (d == 0) throw InvalidInput("factor dimension must be positive");
        if (n > max_amplitudes / d) throw StateTooLarge("amplitude vector exceeds 2^30 entries");
        n *= d;
    }
    return n;
}

StateVector::StateVector(Dims factor_dims, ComplexVector amplitudes)
    : factor_dims_(std::move(factor_dims)), amplitudes_(std::move(amplitudes)) {
    if (factor_dims_.empty()) throw InvalidInput("state needs at least one factor");
    if (static_cast<std::size_t>(amplitudes_.size()) != total_dim(factor_dims_))
        throw InvalidInput("amplitude count " + std::to_string(amplitudes_.size()) +
                           " does not match the product of factor dimensions");
    const double norm = amplitudes_.norm();
    if (!(std::abs(norm - 1.0) <= tol::norm))
        throw InvalidInput("state is not normalized (norm " + std::to_string(norm) + ")");
}

StateVector StateVector::normalized(Dims factor_dims, ComplexVector amplitudes) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidInput("cannot normalize a zero or non-finite vector");
    amplitudes /= norm;
    return StateVector(std::move(factor_dims), std::move(amplitudes));
}

StateVector StateVector::basis(Dims factor_dims, std::size_t index) {
    const auto n = total_dim(factor_dims);
    if (index >= n) throw InvalidInput("basis index out of range");
    ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(n));
    amps(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(factor_dims), std::move(amps));
}

ComplexVector SchmidtForm::reconstruct() const {
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(dim_left * dim_right));
    for (std::size_t l = 0; l < rank(); ++l) {
        const double s = std::sqrt(weights[l]);
        for (Eigen::Index i = 0; i < left.rows(); ++i) {
            out.segment(i * right.rows(), right.rows()) += s * left(i, l) * right.col(l);
        }
    }
    return out;
}

double max_abs(const ComplexMatrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double orthonormality_error(const ComplexMatrix &q) {
    return max_abs(q.adjoint() * q - ComplexMatrix::Identity(q.cols(), q.cols()));
}

bool is_unitary(const ComplexMatrix &u, double tolerance) {
    return u.rows() == u.cols() && orthonormality_error(u) <= tolerance;
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    Dims dims = a.factor_dims();
    dims.insert(dims.end(), b.factor_dims().begin(), b.factor_dims().end());
    total_dim(dims);
    ComplexVector amps(a.amplitudes().size() * b.amplitudes().size());
    for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
        amps.segment(i * b.amplitudes().size(), b.amplitudes().size()) = a.amplitudes()(i) * b.amplitudes();
    // Product of two unit vectors; renormalizing only removes rounding.
    return StateVector::normalized(std::move(dims), std::move(amps));
}

ComplexMatrix haar_unitary(std::size_t dim, Rng &rng) {
    if (dim == 0) throw InvalidInput("unitary dimension must be positive");
    const ComplexMatrix z = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix &r = qr.matrixQR();
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const Complex d = r(k, k);
        const double a  = std::abs(d);
        if (a > 0.0) q.col(k) *= d / a;
    }
    return q;
}

ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    return haar_unitary(dim, rng);
}

SchmidtForm schmidt(const StateVector &state) {
    if (state.factor_count() != 2)
        throw NotBipartite("Schmidt decomposition needs exactly 2 factors, got " +
                           std::to_string(state.factor_count()));
    const auto d1 = state.factor_dims()[0];
    const auto d2 = state.factor_dims()[1];
    const ComplexMatrix coeffs =
        Eigen::Map<const RowMajorMatrix>(state.amplitudes().data(), static_cast<Eigen::Index>(d1),
                                         static_cast<Eigen::Index>(d2));
    Eigen::JacobiSVD<ComplexMatrix> svd(coeffs, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto &sigma = svd.singularValues();

    SchmidtForm form;
    form.dim_left  = d1;
    form.dim_right = d2;
    for (Eigen::Index l = 0; l < sigma.size(); ++l) {
        const double w = sigma(l) * sigma(l);
        if (w < tol::zero_weight) break; // singular values come sorted
        form.weights.push_back(w);
    }
    const auto rank = static_cast<Eigen::Index>(form.weights.size());
    // C = U S V^dag  =>  Phi = sum_l s_l u_l (x) conj(v_l)
    form.left  = svd.matrixU().leftCols(rank);
    form.right = svd.matrixV().leftCols(rank).conjugate();
    return form;
}

StateVector apply_unitary(const StateVector &state, const ComplexMatrix &u) {
    const auto n = static_cast<Eigen::Index>(state.dim());
    if (u.rows() != n || u.cols() != n)
        throw DimensionMismatch("unitary is " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) +
                                ", state dimension is " + std::to_string(n));
    return StateVector::normalized(state.factor_dims(), u * state.amplitudes());
}

ComplexVector apply_local(const ComplexVector &amplitudes, const Dims &dims, std::size_t factor,
                          const ComplexMatrix &m) {
    if (factor >= dims.size()) throw DimensionMismatch("factor index out of range");
    const auto d = static_cast<Eigen::Index>(dims[factor]);
    if (m.rows() != d || m.cols() != d) throw DimensionMismatch("local operator does not match factor dimension");
    Eigen::Index left = 1, right = 1;
    for (std::size_t k = 0; k < factor; ++k) left *= static_cast<Eigen::Index>(dims[k]);
    for (std::size_t k = factor + 1; k < dims.size(); ++k) right *= static_cast<Eigen::Index>(dims[k]);
    if (amplitudes.size() != left * d * right) throw DimensionMismatch("amplitude count does not match dims");

    ComplexVector out(amplitudes.size());
    for (Eigen::Index l = 0; l < left; ++l) {
        Eigen::Map<const RowMajorMatrix> in_block(amplitudes.data() + l * d * right, d, right);
        Eigen::Map<RowMajorMatrix> out_block(out.data() + l * d * right, d, right);
        out_block.noalias() = m * in_block;
    }
    return out;
}

ComplexVector apply_two_site(const ComplexVector &amplitudes, const Dims &dims, std::size_t i, std::size_t j,
                             const ComplexMatrix &u) {
    if (i >= dims.size() || j >= dims.size() || i == j)
        throw DimensionMismatch("invalid factor pair for a two-site operator");
    const auto di = dims[i], dj = dims[j];
    const auto pair_dim = static_cast<Eigen::Index>(di * dj);
    if (u.rows() != pair_dim || u.cols() != pair_dim)
        throw DimensionMismatch("two-site operator does not match the pair dimension");
    const auto n = total_dim(dims);
    if (static_cast<std::size_t>(amplitudes.size()) != n) throw DimensionMismatch("amplitude count does not match dims");

    const Dims strides = strides_of(dims);
    ComplexVector out(amplitudes.size());
    ComplexVector local(pair_dim);
    for (std::size_t base = 0; base < n; ++base) {
        if ((base / strides[i]) % di != 0 || (base / strides[j]) % dj != 0) continue;
        for (std::size_t a = 0; a < di; ++a)
            for (std::size_t b = 0; b < dj; ++b)
                local(static_cast<Eigen::Index>(a * dj + b)) =
                    amplitudes(static_cast<Eigen::Index>(base + a * strides[i] + b * strides[j]));
        const ComplexVector mapped = u * local;
        for (std::size_t a = 0; a < di; ++a)
            for (std::size_t b = 0; b < dj; ++b)
                out(static_cast<Eigen::Index>(base + a * strides[i] + b * strides[j])) =
                    mapped(static_cast<Eigen::Index>(a * dj + b));
    }
    return out;
}

StateVector bipartition(const StateVector &state, const std::vector<std::size_t> &left_factors) {
    const Dims &dims = state.factor_dims();
    std::vector<bool> on_left(dims.size(), false);
    for (auto k : left_factors) {
        if (k >= dims.size() || on_left[k]) throw InvalidInput("invalid factor selection for a bipartition");
        on_left[k] = true;
    }
    Dims order;
    for (auto k : left_factors) order.push_back(k);
    for (std::size_t k = 0; k < dims.size(); ++k)
        if (!on_left[k]) order.push_back(k);

    std::size_t dl = 1, dr = 1;
    for (std::size_t k = 0; k < dims.size(); ++k) (on_left[k] ? dl : dr) *= dims[k];

    const Dims strides = strides_of(dims);
    const auto n       = state.dim();
    ComplexVector out(static_cast<Eigen::Index>(n));
    for (std::size_t idx = 0; idx < n; ++idx) {
        // idx enumerates the permuted multi-index row-major; map it back to the original position.
        std::size_t rest = idx, src = 0;
        for (std::size_t pos = order.size(); pos-- > 0;) {
            const auto k = order[pos];
            src += (rest % dims[k]) * strides[k];
            rest /= dims[k];
        }
        out(static_cast<Eigen::Index>(idx)) = state.amplitudes()(static_cast<Eigen::Index>(src));
    }
    return StateVector::normalized({dl, dr}, std::move(out));
}

ComplexMatrix complete_basis(const ComplexMatrix &columns, std::size_t dim, Rng &rng) {
    const auto n = static_cast<Eigen::Index>(dim);
    const auto r = columns.cols();
    if (columns.rows() != n) throw DimensionMismatch("basis columns do not match the space dimension");
    if (r > n) throw RankExceedsDim("more orthonormal columns than the space dimension");

    ComplexMatrix basis(n, n);
    basis.leftCols(r) = columns;
    if (r == n) return basis;

    ComplexMatrix fill = ginibre(dim, static_cast<std::size_t>(n - r), rng);
    for (int pass = 0; pass < 2; ++pass) fill -= columns * (columns.adjoint() * fill);
    Eigen::HouseholderQR<ComplexMatrix> qr(fill);
    basis.rightCols(n - r) = qr.householderQ() * ComplexMatrix::Identity(n, n - r);
    return basis;
}

ComplexVector random_unit_vector(std::size_t dim, Rng &rng) {
    ComplexVector v = ginibre(dim, 1, rng).col(0);
    return v / v.norm();
}

StateVector random_state(const Dims &dims, Rng &rng) {
    return StateVector::normalized(dims, random_unit_vector(total_dim(dims), rng));
}

StateVector random_product_state(const Dims &dims, Rng &rng) {
    if (dims.empty()) throw InvalidInput("state needs at least one factor");
    StateVector out = StateVector::normalized({dims[0]}, random_unit_vector(dims[0], rng));
    for (std::size_t k = 1; k < dims.size(); ++k)
        out = tensor(out, StateVector::normalized({dims[k]}, random_unit_vector(dims[k], rng)));
    return out;
}

} // namespace sqt
