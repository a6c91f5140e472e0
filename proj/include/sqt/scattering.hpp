#pragma once

#include "sqt/linalg.hpp"
#include "sqt/sq.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace sqt {

// Point spectrum E_k = ((k + 1) / d)^2, k = 0..d-1.
std::vector<double> box_levels(std::size_t d);

// Two particles in a box: H = H0 + coupling * V with H0 = diag(E1) (x) 1 + 1 (x) diag(E2) and V a
// seeded random Hermitian matrix on the joint space, scaled to max |V_ij| = 1.
struct CollisionModel {
    std::size_t d1 = 0;
    std::size_t d2 = 0;
    std::vector<double> free_energies_1;
    std::vector<double> free_energies_2;
    double coupling               = 0.0;
    std::uint64_t interaction_seed = 0;
    double duration               = 1.0;

    // box_levels(d) on both factors.
    static CollisionModel reference(std::size_t d, double coupling, double duration, std::uint64_t interaction_seed);

    // Throws InvalidInput on inconsistent sizes, non-finite values or a negative duration.
    void validate() const;
};

ComplexMatrix free_hamiltonian(const CollisionModel &model);
ComplexMatrix interaction(const CollisionModel &model);

// exp(-i H t) for every t from one diagonalization of H.
class Propagator {
  public:
    explicit Propagator(const CollisionModel &model);
    ComplexMatrix at(double t) const;

  private:
    RealVector energies_;
    ComplexMatrix eigenvectors_;
};

ComplexMatrix evolution(const CollisionModel &model, double t);

// U(duration) applied to in1 (x) in2. Throws DimensionMismatch if the inputs do not match (d1, d2).
StateVector collide(const CollisionModel &model, const StateVector &in1, const StateVector &in2);

struct GasTrajectory {
    std::vector<double> times;
    std::vector<double> sq_estimates;
    std::vector<std::pair<int, int>> pair_schedule; // (-1, -1) for the initial entry of a gas run
    // Schmidt entropy across (particle pair_i | rest); equals sq_estimates for two particles.
    std::vector<double> pair_entropies;

    std::size_t size() const { return times.size(); }
};

// Closed-form S_q of U(t_k)(in1 (x) in2) for `samples` times evenly spaced over [0, duration].
GasTrajectory entropy_trajectory(const CollisionModel &model, const StateVector &in1, const StateVector &in2,
                                 std::size_t samples);

struct GasOptions {
    std::size_t restarts  = 4;
    std::size_t max_iters = 200;
    double tol            = 1e-10;
    std::size_t threads   = 1;
};

inline constexpr std::size_t max_gas_amplitudes = std::size_t{1} << 20;

// n particles of dimension d start in a seeded random product state; each collision applies the model's
// two-body U(duration) to a uniformly drawn pair (i < j). The S_q estimate is recorded initially and after
// every collision using sq_search. Throws StateTooLarge if d^n > 2^20.
GasTrajectory gas_run(std::size_t n, std::size_t d, std::size_t collisions, const CollisionModel &model,
                      std::uint64_t seed, const GasOptions &options = {});

} // namespace sqt
