#include "sqt/sq.hpp"

#include "sqt/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace sqt {

std::string_view to_string(SqMethod m) { return m == SqMethod::closed_form ? "closed_form" : "search"; }

ProductObservable adapted_pair(const SchmidtForm &form, std::uint64_t seed) {
    const auto rank = static_cast<Eigen::Index>(form.rank());
    if (form.rank() > std::min(form.dim_left, form.dim_right) || form.left.cols() != rank || form.right.cols() != rank)
        throw RankExceedsDim("Schmidt rank " + std::to_string(form.rank()) + " exceeds the factor dimensions");
    Rng rng(seed);
    ProductObservable pair;
    pair.factors.push_back(PointObservable::from_basis(complete_basis(form.left, form.dim_left, rng)));
    pair.factors.push_back(PointObservable::from_basis(complete_basis(form.right, form.dim_right, rng)));
    return pair;
}

SqResult sq_bipartite(const StateVector &state) {
    const SchmidtForm form = schmidt(state);
    SqResult r;
    r.value         = shannon_entropy(form.weights);
    r.argmin        = adapted_pair(form, 0);
    r.method        = SqMethod::closed_form;
    r.restarts_used = 0;
    r.converged     = true;
    r.weights       = form.weights;
    return r;
}

namespace {

constexpr double initial_step = 0.3;
constexpr double step_decay   = 0.7;
constexpr double step_floor   = 1e-4;
constexpr int trials_per_factor = 8;
constexpr int gradient_steps    = 4;

double outcome_entropy(const ComplexVector &c) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        const double p = std::norm(c(i));
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

// exp(i t H) for Hermitian H.
ComplexMatrix exp_i(const ComplexMatrix &h, double t) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
    const ComplexVector phases =
        eig.eigenvalues().unaryExpr([t](double l) { return std::polar(1.0, t * l); }).template cast<Complex>();
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

// Random Hermitian direction with unit Frobenius norm.
ComplexMatrix random_direction(Eigen::Index d, Rng &rng) {
    std::normal_distribution<double> normal;
    ComplexMatrix g(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index r = 0; r < d; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(r, c)         = Complex(re, im);
        }
    ComplexMatrix h  = 0.5 * (g + g.adjoint());
    const double nrm = h.norm();
    return nrm > 0.0 ? ComplexMatrix(h / nrm) : ComplexMatrix::Identity(d, d);
}

// Nearest unitary; removes drift accumulated by repeated multiplication.
ComplexMatrix unitarize(const ComplexMatrix &v) {
    Eigen::JacobiSVD<ComplexMatrix> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

// The state with every factor except `factor` rotated into its current eigenbasis.
class FactorProblem {
  public:
    FactorProblem(const StateVector &state, const std::vector<ComplexMatrix> &bases, std::size_t factor)
        : dims_(state.factor_dims()), factor_(factor), partial_(state.amplitudes()) {
        for (std::size_t k = 0; k < bases.size(); ++k)
            if (k != factor) partial_ = apply_local(partial_, dims_, k, bases[k].adjoint());
    }

    ComplexVector coefficients(const ComplexMatrix &basis) const {
        return apply_local(partial_, dims_, factor_, basis.adjoint());
    }
    double value(const ComplexMatrix &basis) const { return outcome_entropy(coefficients(basis)); }

    // Riemannian gradient at `basis` for the update basis * exp(X), X anti-Hermitian.
    // Returned as the Hermitian matrix H = i * grad, so that basis * exp_i(H, t) descends for t > 0.
    ComplexMatrix descent_generator(const ComplexMatrix &basis) const {
        const ComplexVector c = coefficients(basis);
        const auto d          = static_cast<Eigen::Index>(dims_[factor_]);
        Eigen::Index right    = 1;
        for (std::size_t k = factor_ + 1; k < dims_.size(); ++k) right *= static_cast<Eigen::Index>(dims_[k]);
        const Eigen::Index left = c.size() / (d * right);

        // G_ij = sum_r (ln p_ir + 1) conj(c_ir) c_jr; dS = 2 Re sum_ij X_ij G_ij
        ComplexMatrix g = ComplexMatrix::Zero(d, d);
        using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        for (Eigen::Index l = 0; l < left; ++l) {
            Eigen::Map<const RowMajorMatrix> block(c.data() + l * d * right, d, right);
            RowMajorMatrix weighted = block;
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index r = 0; r < right; ++r) {
                    const double p  = std::norm(block(i, r));
                    weighted(i, r) *= p > 0.0 ? std::log(p) + 1.0 : 0.0;
                }
            g.noalias() += weighted.conjugate() * block.transpose();
        }
        const ComplexMatrix euclid = 2.0 * g.conjugate();
        const ComplexMatrix grad   = 0.5 * (euclid - euclid.adjoint()); // anti-Hermitian part
        // exp(-t grad) = exp_i(i grad, t)
        return Complex(0.0, 1.0) * grad;
    }

  private:
    Dims dims_;
    std::size_t factor_;
    ComplexVector partial_;
};

double joint_value(const StateVector &state, const std::vector<ComplexMatrix> &bases) {
    ComplexVector c = state.amplitudes();
    for (std::size_t k = 0; k < bases.size(); ++k) c = apply_local(c, state.factor_dims(), k, bases[k].adjoint());
    return outcome_entropy(c);
}

std::vector<ComplexMatrix> joint_generators(const StateVector &state, const std::vector<ComplexMatrix> &bases) {
    std::vector<ComplexMatrix> gens;
    for (std::size_t k = 0; k < bases.size(); ++k) gens.push_back(FactorProblem(state, bases, k).descent_generator(bases[k]));
    return gens;
}

double inner(const std::vector<ComplexMatrix> &a, const std::vector<ComplexMatrix> &b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k].array().conjugate() * b[k].array()).real().sum();
    return s;
}

struct Polished {
    double value;
    bool converged; // stopped on stalled progress rather than the iteration cap
};

// Polak-Ribiere conjugate gradient over all factor bases at once. Coordinate sweeps stall where the
// factors are strongly coupled near the minimum; the joint direction does not.
Polished joint_polish(const StateVector &state, std::vector<ComplexMatrix> &bases, double value, std::size_t max_iters,
                      double tol) {
    std::vector<ComplexMatrix> grad = joint_generators(state, bases);
    std::vector<ComplexMatrix> dir  = grad;
    double t                        = 1.0;
    int stalls                      = 0;
    for (std::size_t it = 0; it < max_iters; ++it) {
        if (value <= 0.0) return {value, true};
        double slope = inner(grad, dir);
        if (!(slope > 0.0)) {
            dir   = grad;
            slope = inner(grad, grad);
        }
        if (!(slope > 0.0)) return {value, true};

        std::vector<ComplexMatrix> trial(bases.size());
        bool accepted = false;
        double v      = value;
        for (int back = 0; back < 50; ++back, t *= 0.5) {
            for (std::size_t k = 0; k < bases.size(); ++k) trial[k] = bases[k] * exp_i(dir[k], t);
            v = joint_value(state, trial);
            if (v <= value - 1e-4 * t * slope && v < value) {
                accepted = true;
                break;
            }
        }
        if (!accepted) return {value, true};
        for (auto &b : trial) b = unitarize(b);
        const double improvement = value - v;
        bases = std::move(trial);
        value = joint_value(state, bases);
        t     = std::min(2.0 * t, 10.0);

        const std::vector<ComplexMatrix> next = joint_generators(state, bases);
        std::vector<ComplexMatrix> diff(next.size());
        for (std::size_t k = 0; k < next.size(); ++k) diff[k] = next[k] - grad[k];
        const double beta = std::max(0.0, inner(next, diff) / inner(grad, grad));
        for (std::size_t k = 0; k < next.size(); ++k) dir[k] = next[k] + beta * dir[k];
        grad = next;

        stalls = improvement < tol ? stalls + 1 : 0;
        if (stalls >= 3) return {value, true};
    }
    return {value, false};
}

ProductObservable observable_from_bases(const std::vector<ComplexMatrix> &bases) {
    ProductObservable obs;
    for (const auto &b : bases) obs.factors.push_back(PointObservable::from_basis(b));
    return obs;
}

struct RestartOutcome {
    double value = std::numeric_limits<double>::infinity();
    std::vector<ComplexMatrix> bases;
    bool converged = false;
};

RestartOutcome run_restart(const StateVector &state, const SearchOptions &opt, std::size_t restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(restart), static_cast<std::uint32_t>(restart >> 32)};
    Rng rng(seq);

    const Dims &dims = state.factor_dims();
    RestartOutcome out;
    for (auto d : dims) out.bases.push_back(haar_unitary(d, rng));
    std::vector<double> grad_step(dims.size(), 1.0);

    double step  = initial_step;
    double value = joint_value(state, out.bases);

    for (std::size_t sweep = 0; sweep < opt.max_iters; ++sweep) {
        const double before = value;
        bool random_hit     = false;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            const FactorProblem problem(state, out.bases, k);
            const auto d = static_cast<Eigen::Index>(dims[k]);
            ComplexMatrix &basis = out.bases[k];
            value = problem.value(basis);

            if (d > 1) {
                for (int trial = 0; trial < trials_per_factor; ++trial) {
                    const ComplexMatrix proposal = basis * exp_i(random_direction(d, rng), step);
                    const double v               = problem.value(proposal);
                    if (v < value) {
                        value      = v;
                        basis      = proposal;
                        random_hit = true;
                    }
                }
                // Polish with backtracking gradient steps.
                for (int g = 0; g < gradient_steps; ++g) {
                    const ComplexMatrix gen = problem.descent_generator(basis);
                    const double slope      = gen.squaredNorm();
                    if (!(slope > 0.0)) break;
                    double t      = grad_step[k];
                    bool accepted = false;
                    for (int back = 0; back < 40; ++back, t *= 0.5) {
                        const ComplexMatrix proposal = basis * exp_i(gen, t);
                        const double v               = problem.value(proposal);
                        if (v <= value - 1e-4 * t * slope && v < value) {
                            value    = v;
                            basis    = proposal;
                            accepted = true;
                            break;
                        }
                    }
                    grad_step[k] = accepted ? std::min(2.0 * t, 10.0) : 1.0;
                    if (!accepted) break;
                }
            }
            basis = unitarize(basis);
        }
        if (!random_hit) step = std::max(step * step_decay, step_floor);
        if ((before - value < opt.tol && step <= step_floor) || value <= 0.0) break;
    }
    const Polished polished = joint_polish(state, out.bases, joint_value(state, out.bases), opt.max_iters, opt.tol);
    out.value               = polished.value;
    out.converged           = polished.converged;
    return out;
}

} // namespace

SqResult sq_search(const StateVector &state, const SearchOptions &options) {
    if (options.restarts == 0) throw InvalidInput("search needs at least one restart");
    if (!(options.tol >= 0.0)) throw InvalidInput("search tolerance must be non-negative");

    std::vector<RestartOutcome> outcomes(options.restarts);
    std::size_t workers = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    workers             = std::min(workers, options.restarts);
    if (workers <= 1) {
        for (std::size_t r = 0; r < options.restarts; ++r) outcomes[r] = run_restart(state, options, r);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < options.restarts; r = next++) outcomes[r] = run_restart(state, options, r);
            });
    }

    // First restart wins ties.
    std::size_t best = 0;
    for (std::size_t r = 1; r < outcomes.size(); ++r)
        if (outcomes[r].value < outcomes[best].value) best = r;

    SqResult result;
    result.argmin        = observable_from_bases(outcomes[best].bases);
    const Scheme scheme  = measurement_scheme(state, result.argmin);
    result.value         = entropy(scheme);
    result.weights       = scheme.weights();
    result.method        = SqMethod::search;
    result.restarts_used = options.restarts;
    result.converged     = outcomes[best].converged;
    return result;
}

std::vector<std::pair<std::size_t, std::size_t>> degenerate_blocks(const std::vector<double> &weights) {
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= weights.size(); ++i) {
        if (i == weights.size() || std::abs(weights[i] - weights[start]) > tol::degeneracy) {
            blocks.emplace_back(start, i - start);
            start = i;
        }
    }
    return blocks;
}

SchmidtForm degenerate_orbit(const SchmidtForm &form, const ComplexMatrix &u, std::size_t block_start) {
    const auto k = static_cast<std::size_t>(u.rows());
    if (!is_unitary(u)) throw InvalidInput("block rotation must be a square unitary matrix");
    if (block_start + k > form.rank()) throw DimensionMismatch("block rotation extends past the Schmidt rank");
    const auto [lo, hi] = std::minmax_element(form.weights.begin() + static_cast<std::ptrdiff_t>(block_start),
                                              form.weights.begin() + static_cast<std::ptrdiff_t>(block_start + k));
    if (k > 0 && *hi - *lo > tol::degeneracy) throw NotDegenerate("weights in the rotated block are not equal");

    SchmidtForm out = form;
    const auto s    = static_cast<Eigen::Index>(block_start);
    const auto n    = static_cast<Eigen::Index>(k);
    out.left.middleCols(s, n)  = form.left.middleCols(s, n) * u;
    out.right.middleCols(s, n) = form.right.middleCols(s, n) * u.conjugate();
    return out;
}

std::vector<double> substitution_marginal(const std::vector<double> &weights, const ComplexMatrix &u) {
    if (static_cast<std::size_t>(u.cols()) != weights.size())
        throw DimensionMismatch("substitution matrix must have one column per weight");
    std::vector<double> p(static_cast<std::size_t>(u.rows()), 0.0);
    for (Eigen::Index s = 0; s < u.rows(); ++s)
        for (Eigen::Index l = 0; l < u.cols(); ++l) p[static_cast<std::size_t>(s)] += weights[static_cast<std::size_t>(l)] * std::norm(u(s, l));
    return p;
}

double convexity_gap(const StateVector &state, const PointObservable &c) {
    if (state.factor_count() != 2) throw NotBipartite("convexity gap needs a bipartite state");
    if (c.dim() != state.factor_dims()[0]) throw DimensionMismatch("C does not act on the first factor");
    if (!c.is_simple()) throw InvalidInput("C must have a simple spectrum");
    ProductObservable c_one;
    c_one.factors = {c, PointObservable::identity(state.factor_dims()[1])};
    return s_tilde(state, c_one) - shannon_entropy(schmidt(state).weights);
}

} // namespace sqt
