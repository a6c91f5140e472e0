#pragma once

#include "sqt/linalg.hpp"
#include "sqt/observables.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace sqt {

enum class SqMethod { closed_form, search };

std::string_view to_string(SqMethod m);

// Minimum measurement entropy over simple product observables, with the observable that attains it.
struct SqResult {
    double value = 0.0; // nats
    ProductObservable argmin;
    SqMethod method            = SqMethod::closed_form;
    std::size_t restarts_used  = 0;
    bool converged             = true;
    std::vector<double> weights; // Schmidt weights (closed form) or outcome probabilities of argmin (search)
};

// Builds A (x) B whose eigenbases start with the left/right Schmidt vectors; the remaining basis
// vectors are a seeded completion. Eigenvalues are 1, 2, ..., d on each factor.
// Throws RankExceedsDim if the form has more vectors than either factor dimension.
ProductObservable adapted_pair(const SchmidtForm &form, std::uint64_t seed);

// Closed form for two factors: the Shannon entropy of the Schmidt weights. Throws NotBipartite.
SqResult sq_bipartite(const StateVector &state);

struct SearchOptions {
    std::size_t restarts  = 10;
    std::size_t max_iters = 400; // sweeps per restart
    double tol            = 1e-12;
    std::uint64_t seed    = 0;
    std::size_t threads   = 1; // 0 = hardware concurrency
};

// Upper-bound estimate for any number of factors: per-factor coordinate descent over eigenbases from
// Haar-random starts. Each restart draws from its own stream derived from (seed, restart index), so
// the result does not depend on the thread count.
SqResult sq_search(const StateVector &state, const SearchOptions &options);

// [start, start + length) ranges of Schmidt weights equal within 1e-9, in order.
std::vector<std::pair<std::size_t, std::size_t>> degenerate_blocks(const std::vector<double> &weights);

// Rotates the left vectors of the block starting at block_start by u and the right vectors by conj(u).
// Throws NotDegenerate if the block's weights are not all equal within 1e-9.
SchmidtForm degenerate_orbit(const SchmidtForm &form, const ComplexMatrix &u, std::size_t block_start = 0);

// S~(state, C (x) 1) minus the Schmidt entropy of the state. Never below zero up to rounding.
double convexity_gap(const StateVector &state, const PointObservable &c);

// Outcome distribution of C (x) 1 written through the substitution phi_l = sum_s u_sl c_s, where u is
// the matrix of Schmidt-vector components in C's eigenbasis (d1 x rank): p_s = sum_l w_l |u_sl|^2.
std::vector<double> substitution_marginal(const std::vector<double> &weights, const ComplexMatrix &u);

} // namespace sqt
