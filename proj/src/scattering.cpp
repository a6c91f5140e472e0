#include "sqt/scattering.hpp"

#include "sqt/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace sqt {

std::vector<double> box_levels(std::size_t d) {
    std::vector<double> levels;
    for (std::size_t k = 0; k < d; ++k) {
        const double x = static_cast<double>(k + 1) / static_cast<double>(d);
        levels.push_back(x * x);
    }
    return levels;
}

CollisionModel CollisionModel::reference(std::size_t d, double coupling, double duration,
                                         std::uint64_t interaction_seed) {
    CollisionModel m;
    m.d1 = m.d2 = d;
    m.free_energies_1    = box_levels(d);
    m.free_energies_2    = m.free_energies_1;
    m.coupling           = coupling;
    m.duration           = duration;
    m.interaction_seed   = interaction_seed;
    return m;
}

void CollisionModel::validate() const {
    if (d1 == 0 || d2 == 0) throw InvalidInput("collision model dimensions must be positive");
    if (free_energies_1.size() != d1 || free_energies_2.size() != d2)
        throw InvalidInput("free energy lists must have one level per basis state");
    for (double e : free_energies_1)
        if (!std::isfinite(e)) throw InvalidInput("free energies must be finite");
    for (double e : free_energies_2)
        if (!std::isfinite(e)) throw InvalidInput("free energies must be finite");
    if (!std::isfinite(coupling)) throw InvalidInput("coupling must be finite");
    if (!(duration >= 0.0) || !std::isfinite(duration)) throw InvalidInput("duration must be a finite non-negative time");
}

ComplexMatrix free_hamiltonian(const CollisionModel &model) {
    model.validate();
    const auto n    = static_cast<Eigen::Index>(model.d1 * model.d2);
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < model.d1; ++i)
        for (std::size_t k = 0; k < model.d2; ++k) {
            const auto idx = static_cast<Eigen::Index>(i * model.d2 + k);
            h(idx, idx)    = model.free_energies_1[i] + model.free_energies_2[k];
        }
    return h;
}

ComplexMatrix interaction(const CollisionModel &model) {
    model.validate();
    const auto n = static_cast<Eigen::Index>(model.d1 * model.d2);
    Rng rng(model.interaction_seed);
    std::normal_distribution<double> normal;
    ComplexMatrix g(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(r, c)         = Complex(re, im);
        }
    ComplexMatrix v    = 0.5 * (g + g.adjoint());
    const double scale = max_abs(v);
    if (scale > 0.0) v /= scale;
    return v;
}

Propagator::Propagator(const CollisionModel &model) {
    const ComplexMatrix h = free_hamiltonian(model) + model.coupling * interaction(model);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(h);
    energies_     = eig.eigenvalues();
    eigenvectors_ = eig.eigenvectors();
}

ComplexMatrix Propagator::at(double t) const {
    const ComplexVector phases =
        energies_.unaryExpr([t](double e) { return std::polar(1.0, -e * t); }).template cast<Complex>();
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

ComplexMatrix evolution(const CollisionModel &model, double t) { return Propagator(model).at(t); }

namespace {

void check_inputs(const CollisionModel &model, const StateVector &in1, const StateVector &in2) {
    model.validate();
    if (in1.factor_count() != 1 || in2.factor_count() != 1 || in1.dim() != model.d1 || in2.dim() != model.d2)
        throw DimensionMismatch("in-states must be one-particle states of dimensions " + std::to_string(model.d1) +
                                " and " + std::to_string(model.d2));
}

} // namespace

StateVector collide(const CollisionModel &model, const StateVector &in1, const StateVector &in2) {
    check_inputs(model, in1, in2);
    return apply_unitary(tensor(in1, in2), evolution(model, model.duration));
}

GasTrajectory entropy_trajectory(const CollisionModel &model, const StateVector &in1, const StateVector &in2,
                                 std::size_t samples) {
    check_inputs(model, in1, in2);
    if (samples < 2) throw InvalidInput("a trajectory needs at least 2 samples");
    const Propagator propagator(model);
    const StateVector in = tensor(in1, in2);

    GasTrajectory traj;
    for (std::size_t k = 0; k < samples; ++k) {
        const double t       = model.duration * static_cast<double>(k) / static_cast<double>(samples - 1);
        const StateVector at = apply_unitary(in, propagator.at(t));
        const double sq      = sq_bipartite(at).value;
        traj.times.push_back(t);
        traj.sq_estimates.push_back(sq);
        traj.pair_schedule.emplace_back(0, 1);
        traj.pair_entropies.push_back(sq);
    }
    return traj;
}

GasTrajectory gas_run(std::size_t n, std::size_t d, std::size_t collisions, const CollisionModel &model,
                      std::uint64_t seed, const GasOptions &options) {
    if (n < 3) throw InvalidInput("a gas needs at least 3 particles");
    if (d == 0) throw InvalidInput("particle dimension must be positive");
    model.validate();
    if (model.d1 != d || model.d2 != d) throw DimensionMismatch("collision model dimensions must equal the particle dimension");
    std::size_t amplitudes = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (amplitudes > max_gas_amplitudes / d) throw StateTooLarge("d^n exceeds 2^20 amplitudes");
        amplitudes *= d;
    }

    Rng rng(seed);
    const Dims dims(n, d);
    StateVector state             = random_product_state(dims, rng);
    const ComplexMatrix two_body  = evolution(model, model.duration);
    std::uniform_int_distribution<std::size_t> pick(0, n * (n - 1) / 2 - 1);

    GasTrajectory traj;
    auto record = [&](std::size_t step, int i, int j) {
        SearchOptions search;
        search.restarts  = options.restarts;
        search.max_iters = options.max_iters;
        search.tol       = options.tol;
        search.threads   = options.threads;
        search.seed      = seed + step;
        traj.times.push_back(model.duration * static_cast<double>(step));
        traj.sq_estimates.push_back(sq_search(state, search).value);
        traj.pair_schedule.emplace_back(i, j);
        const std::size_t cut = i < 0 ? 0 : static_cast<std::size_t>(i);
        traj.pair_entropies.push_back(sq_bipartite(bipartition(state, {cut})).value);
    };

    record(0, -1, -1);
    for (std::size_t c = 1; c <= collisions; ++c) {
        // Unordered pair index -> (i, j) with i < j.
        std::size_t p = pick(rng), i = 0;
        while (p >= n - 1 - i) {
            p -= n - 1 - i;
            ++i;
        }
        const std::size_t j = i + 1 + p;
        state = StateVector::normalized(dims, apply_two_site(state.amplitudes(), dims, i, j, two_body));
        record(c, static_cast<int>(i), static_cast<int>(j));
    }
    return traj;
}

} // namespace sqt
