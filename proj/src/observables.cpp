#include "sqt/observables.hpp"

#include "sqt/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace sqt {

namespace {

std::vector<std::vector<std::size_t>> cluster_eigenvalues(const RealVector &values) {
    std::vector<std::size_t> order(static_cast<std::size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values(a) < values(b); });
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k == 0 || values(order[k]) - values(order[k - 1]) > tol::eigen_gap) groups.emplace_back();
        groups.back().push_back(order[k]);
    }
    return groups;
}

void check_fits(const StateVector &state, const ProductObservable &obs) {
    if (obs.dims() != state.factor_dims()) throw DimensionMismatch("observable factors do not match the state's factor dims");
}

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

// For every factor, the eigenspace index of each eigenbasis column.
std::vector<std::vector<std::size_t>> column_to_space(const ProductObservable &obs) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto &f : obs.factors) {
        std::vector<std::size_t> m(f.dim());
        for (std::size_t g = 0; g < f.eigenspaces().size(); ++g)
            for (auto col : f.eigenspaces()[g]) m[col] = g;
        out.push_back(std::move(m));
    }
    return out;
}

struct EventTable {
    Dims space_counts;                 // eigenspaces per factor
    std::vector<std::size_t> event_of; // joint basis index -> event index (row-major over space tuples)
    std::size_t event_count = 0;
};

EventTable build_events(const ProductObservable &obs) {
    EventTable t;
    for (const auto &f : obs.factors) t.space_counts.push_back(f.eigenspaces().size());
    t.event_count      = total_dim(t.space_counts);
    const auto col_map = column_to_space(obs);
    const Dims dims    = obs.dims();
    const auto n       = total_dim(dims);
    t.event_of.resize(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        std::size_t rest = idx, event = 0, scale = 1;
        for (std::size_t k = dims.size(); k-- > 0;) {
            const auto j = rest % dims[k];
            rest /= dims[k];
            event += col_map[k][j] * scale;
            scale *= t.space_counts[k];
        }
        t.event_of[idx] = event;
    }
    return t;
}

// Eigenspace index of each factor for an event index.
std::vector<std::size_t> event_spaces(std::size_t event, const Dims &space_counts) {
    std::vector<std::size_t> spaces(space_counts.size());
    for (std::size_t k = space_counts.size(); k-- > 0;) {
        spaces[k] = event % space_counts[k];
        event /= space_counts[k];
    }
    return spaces;
}

std::vector<double> event_weights(const ComplexVector &coeffs, const EventTable &table) {
    std::vector<double> w(table.event_count, 0.0);
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) w[table.event_of[static_cast<std::size_t>(i)]] += std::norm(coeffs(i));
    for (auto &x : w) x = std::clamp(x, 0.0, 1.0);
    // A single event is certain for a normalized state; drop the rounding residue.
    if (w.size() == 1) w[0] = 1.0;
    return w;
}

} // namespace

PointObservable::PointObservable(RealVector eigenvalues, ComplexMatrix eigenbasis)
    : eigenvalues_(std::move(eigenvalues)), eigenbasis_(std::move(eigenbasis)) {
    if (eigenvalues_.size() == 0) throw InvalidInput("observable needs a positive dimension");
    if (eigenbasis_.rows() != eigenvalues_.size() || eigenbasis_.cols() != eigenvalues_.size())
        throw InvalidInput("eigenbasis must be square and match the eigenvalue count");
    if (!eigenvalues_.allFinite()) throw InvalidInput("eigenvalues must be finite");
    if (orthonormality_error(eigenbasis_) > tol::orthonormal) throw InvalidInput("eigenbasis is not orthonormal");
    eigenspaces_ = cluster_eigenvalues(eigenvalues_);
    simple_      = eigenspaces_.size() == dim();
}

PointObservable PointObservable::identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return PointObservable(RealVector::Ones(n), ComplexMatrix::Identity(n, n));
}

PointObservable PointObservable::from_basis(ComplexMatrix basis) {
    RealVector values = RealVector::LinSpaced(basis.cols(), 1.0, static_cast<double>(basis.cols()));
    return PointObservable(std::move(values), std::move(basis));
}

PointObservable PointObservable::from_hermitian(const ComplexMatrix &h) {
    if (h.rows() != h.cols()) throw InvalidInput("observable matrix must be square");
    if (max_abs(h - h.adjoint()) > tol::commutator) throw InvalidInput("observable matrix is not self-adjoint");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
    return PointObservable(eig.eigenvalues(), eig.eigenvectors());
}

ComplexMatrix PointObservable::matrix() const {
    return eigenbasis_ * eigenvalues_.cast<Complex>().asDiagonal() * eigenbasis_.adjoint();
}

ComplexMatrix PointObservable::projector(std::size_t eigenspace) const {
    const auto n   = static_cast<Eigen::Index>(dim());
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    for (auto col : eigenspaces_.at(eigenspace)) {
        const auto c = static_cast<Eigen::Index>(col);
        p += eigenbasis_.col(c) * eigenbasis_.col(c).adjoint();
    }
    return p;
}

ProductObservable ProductObservable::identity(const Dims &dims) {
    ProductObservable obs;
    for (auto d : dims) obs.factors.push_back(PointObservable::identity(d));
    return obs;
}

Dims ProductObservable::dims() const {
    Dims d;
    for (const auto &f : factors) d.push_back(f.dim());
    return d;
}

bool ProductObservable::is_simple() const {
    return std::all_of(factors.begin(), factors.end(), [](const auto &f) { return f.is_simple(); });
}

ComplexVector product_basis_coefficients(const StateVector &state, const ProductObservable &obs) {
    check_fits(state, obs);
    ComplexVector c = state.amplitudes();
    for (std::size_t k = 0; k < obs.factors.size(); ++k)
        c = apply_local(c, state.factor_dims(), k, obs.factors[k].eigenbasis().adjoint());
    return c;
}

Scheme measurement_scheme(const StateVector &state, const ProductObservable &obs) {
    const ComplexVector coeffs = product_basis_coefficients(state, obs);
    const EventTable table     = build_events(obs);
    std::vector<double> weights = event_weights(coeffs, table);

    std::vector<std::string> events;
    events.reserve(table.event_count);
    for (std::size_t e = 0; e < table.event_count; ++e) {
        const auto spaces = event_spaces(e, table.space_counts);
        std::string label = "(";
        for (std::size_t k = 0; k < spaces.size(); ++k) {
            const auto &f   = obs.factors[k];
            const auto col  = f.eigenspaces()[spaces[k]].front();
            label += (k > 0 ? "," : "") + format_value(f.eigenvalues()(static_cast<Eigen::Index>(col)));
        }
        events.push_back(label + ")");
    }
    return Scheme(std::move(events), std::move(weights));
}

double s_tilde(const StateVector &state, const ProductObservable &obs) { return entropy(measurement_scheme(state, obs)); }

std::vector<MixtureComponent> induced_mixture(const StateVector &state, const ProductObservable &obs) {
    const ComplexVector coeffs  = product_basis_coefficients(state, obs);
    const EventTable table      = build_events(obs);
    const auto weights          = event_weights(coeffs, table);
    const Dims &dims            = state.factor_dims();

    std::vector<MixtureComponent> out;
    for (std::size_t e = 0; e < table.event_count; ++e) {
        if (weights[e] < tol::zero_weight) continue;
        const auto spaces = event_spaces(e, table.space_counts);
        bool all_rank_one = true;
        for (std::size_t k = 0; k < spaces.size(); ++k)
            all_rank_one = all_rank_one && obs.factors[k].eigenspaces()[spaces[k]].size() == 1;

        if (all_rank_one) {
            std::optional<StateVector> product;
            for (std::size_t k = 0; k < spaces.size(); ++k) {
                const auto col = static_cast<Eigen::Index>(obs.factors[k].eigenspaces()[spaces[k]].front());
                StateVector v  = StateVector::normalized({dims[k]}, obs.factors[k].eigenbasis().col(col));
                product        = product ? tensor(*product, v) : v;
            }
            out.push_back({weights[e], *product});
        } else {
            // Project onto the event's eigenspace tuple and map back to the original basis.
            ComplexVector masked = ComplexVector::Zero(coeffs.size());
            for (Eigen::Index i = 0; i < coeffs.size(); ++i)
                if (table.event_of[static_cast<std::size_t>(i)] == e) masked(i) = coeffs(i);
            for (std::size_t k = 0; k < obs.factors.size(); ++k)
                masked = apply_local(masked, dims, k, obs.factors[k].eigenbasis());
            out.push_back({weights[e], StateVector::normalized(dims, std::move(masked))});
        }
    }
    return out;
}

bool is_finer_op(const PointObservable &a, const PointObservable &b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("observables act on spaces of different dimension");
    const ComplexMatrix ma = a.matrix();
    const ComplexMatrix mb = b.matrix();
    if (max_abs(ma * mb - mb * ma) > tol::commutator) return false;

    std::vector<ComplexMatrix> a_projectors;
    for (std::size_t g = 0; g < a.eigenspaces().size(); ++g) a_projectors.push_back(a.projector(g));

    for (std::size_t h = 0; h < b.eigenspaces().size(); ++h) {
        const ComplexMatrix q = b.projector(h);
        ComplexMatrix sum     = ComplexMatrix::Zero(q.rows(), q.cols());
        for (const auto &p : a_projectors) {
            const ComplexMatrix qp = q * p;
            if (max_abs(qp - p) <= tol::subspace) {
                sum += p; // eigenspace of a inside this eigenspace of b
            } else if (max_abs(qp) > tol::subspace) {
                return false; // straddles the eigenspace
            }
        }
        if (max_abs(sum - q) > tol::subspace) return false;
    }
    return true;
}

PointObservable random_simple_observable(std::size_t dim, Rng &rng) {
    return PointObservable::from_basis(haar_unitary(dim, rng));
}

PointObservable refine_to_simple(const PointObservable &a, std::uint64_t seed) {
    if (a.is_simple()) return a;
    Rng rng(seed);
    const auto n        = static_cast<Eigen::Index>(a.dim());
    ComplexMatrix basis = a.eigenbasis();
    RealVector values(n);
    double next = 1.0;
    for (const auto &space : a.eigenspaces()) {
        const auto k = static_cast<Eigen::Index>(space.size());
        ComplexMatrix block(n, k);
        for (Eigen::Index c = 0; c < k; ++c) block.col(c) = a.eigenbasis().col(static_cast<Eigen::Index>(space[c]));
        if (k > 1) block = block * haar_unitary(space.size(), rng);
        for (Eigen::Index c = 0; c < k; ++c) {
            const auto col = static_cast<Eigen::Index>(space[c]);
            basis.col(col) = block.col(c);
            values(col)    = next++;
        }
    }
    return PointObservable(std::move(values), std::move(basis));
}

} // namespace sqt
