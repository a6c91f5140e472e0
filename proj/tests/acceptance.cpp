// Acceptance battery: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "sqt/linalg.hpp"
#include "sqt/observables.hpp"
#include "sqt/scattering.hpp"
#include "sqt/schemes.hpp"
#include "sqt/sq.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

using namespace sqt;

namespace {

const double ln2 = std::log(2.0);

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int number;
    const char *title;
    double time_limit; // seconds
    std::function<Outcome()> run;
};

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

ProductObservable pair_of(PointObservable a, PointObservable b) {
    ProductObservable p;
    p.factors = {std::move(a), std::move(b)};
    return p;
}

std::size_t dim_in(Rng &rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Outcome oracle_lower_bound() {
    Rng rng(101);
    double worst_excess = -std::numeric_limits<double>::infinity(); // max of sq - min sampled
    double worst_attain = 0.0;
    for (std::size_t k = 0; k < 50; ++k) {
        const std::size_t d1 = 2 + k % 5, d2 = 2 + (k / 5) % 5; // every pair from 2x2 to 6x6
        const StateVector s  = random_state({d1, d2}, rng);
        const double sq      = sq_bipartite(s).value;
        double min_sampled   = std::numeric_limits<double>::infinity();
        for (int j = 0; j < 200; ++j)
            min_sampled = std::min(min_sampled, s_tilde(s, pair_of(random_simple_observable(d1, rng),
                                                                   random_simple_observable(d2, rng))));
        worst_excess = std::max(worst_excess, sq - min_sampled);
        worst_attain = std::max(worst_attain, std::abs(s_tilde(s, adapted_pair(schmidt(s), k)) - sq));
    }
    return {worst_excess <= 1e-10 && worst_attain <= 1e-12,
            fmt("max(S_q - min sampled) = %.3g, attainment error = %.3g", worst_excess, worst_attain)};
}

Outcome proof_chain() {
    Rng rng(102);
    double worst_ineq = -std::numeric_limits<double>::infinity();
    double worst_eq   = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const std::size_t d1 = dim_in(rng, 2, 6), d2 = dim_in(rng, 2, 6);
        const StateVector s  = random_state({d1, d2}, rng);
        const PointObservable c = random_simple_observable(d1, rng);
        const PointObservable d = random_simple_observable(d2, rng);
        const ProductObservable ab = adapted_pair(schmidt(s), static_cast<std::uint64_t>(k));
        const PointObservable one  = PointObservable::identity(d2);
        const double s_cd = s_tilde(s, pair_of(c, d));
        const double s_c1 = s_tilde(s, pair_of(c, one));
        const double s_a1 = s_tilde(s, pair_of(ab.factors[0], one));
        const double s_ab = s_tilde(s, ab);
        worst_ineq = std::max({worst_ineq, s_c1 - s_cd, s_a1 - s_c1});
        worst_eq   = std::max(worst_eq, std::abs(s_a1 - s_ab));
    }
    return {worst_ineq <= 1e-10 && worst_eq <= 1e-12,
            fmt("worst inequality violation = %.3g, equality error = %.3g", worst_ineq, worst_eq)};
}

Outcome convexity_bound() {
    Rng rng(103);
    double min_gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 1000; ++k) {
        const std::size_t d1 = dim_in(rng, 2, 6), d2 = dim_in(rng, 2, 6);
        const StateVector s  = random_state({d1, d2}, rng);
        min_gap              = std::min(min_gap, convexity_gap(s, random_simple_observable(d1, rng)));
    }
    return {min_gap >= -1e-10, fmt("min gap = %.3g", min_gap)};
}

Outcome scheme_monotonicity() {
    Rng rng(104);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 1000; ++k) {
        const std::size_t n = dim_in(rng, 1, 12);
        std::exponential_distribution<double> expo(1.0);
        std::vector<double> w(n);
        double sum = 0.0;
        for (auto &x : w) sum += (x = expo(rng));
        for (auto &x : w) x /= sum;
        const std::size_t groups = dim_in(rng, 1, n);
        std::vector<std::vector<std::size_t>> g(groups);
        for (std::size_t i = 0; i < n; ++i) g[dim_in(rng, 0, groups - 1)].push_back(i);
        Partition p;
        for (auto &x : g)
            if (!x.empty()) p.groups.push_back(x);
        const Scheme fine = Scheme::from_weights(w);
        worst             = std::max(worst, entropy(coarsen(fine, p)) - entropy(fine));
    }
    return {worst <= 1e-12, fmt("max entropy increase = %.3g", worst)};
}

Outcome factorized_in_state() {
    Rng rng(105);
    double worst_closed = 0.0, worst_search = 0.0;
    for (int k = 0; k < 100; ++k) {
        const StateVector s = random_product_state({dim_in(rng, 2, 4), dim_in(rng, 2, 4)}, rng);
        worst_closed        = std::max(worst_closed, sq_bipartite(s).value);
        SearchOptions opt;
        opt.restarts = 10;
        opt.seed     = static_cast<std::uint64_t>(k);
        worst_search = std::max(worst_search, sq_search(s, opt).value);
    }
    return {worst_closed <= 1e-12 && worst_search <= 1e-6,
            fmt("max closed form = %.3g, max search = %.3g", worst_closed, worst_search)};
}

Outcome degenerate_orbit_check() {
    ComplexVector a = ComplexVector::Zero(4);
    a(0) = a(3)     = 1.0;
    const StateVector bell = StateVector::normalized({2, 2}, a);
    const SchmidtForm form = schmidt(bell);
    Rng rng(106);
    double worst_entropy = 0.0, worst_recon = 0.0;
    for (int k = 0; k < 100; ++k) {
        const SchmidtForm rotated = degenerate_orbit(form, haar_unitary(2, rng));
        worst_recon   = std::max(worst_recon, (rotated.reconstruct() - bell.amplitudes()).cwiseAbs().maxCoeff());
        worst_entropy = std::max(worst_entropy, std::abs(s_tilde(bell, adapted_pair(rotated, rng())) - ln2));
    }
    return {worst_entropy <= 1e-12 && worst_recon <= 1e-10,
            fmt("max |S~ - ln 2| = %.3g, max reconstruction error = %.3g", worst_entropy, worst_recon)};
}

Outcome search_agreement() {
    Rng rng(107);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const StateVector s = random_state({4, 4}, rng);
        SearchOptions opt;
        opt.restarts = 10;
        opt.seed     = static_cast<std::uint64_t>(k);
        worst        = std::max(worst, std::abs(sq_search(s, opt).value - sq_bipartite(s).value));
    }
    return {worst <= 1e-6, fmt("max |search - closed form| = %.3g", worst)};
}

Outcome entanglement_production() {
    int entangled     = 0;
    double worst_free = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        // Seed s fixes both the interaction and the product in-state.
        Rng rng(seed);
        const StateVector in1 = random_state({4}, rng);
        const StateVector in2 = random_state({4}, rng);
        if (sq_bipartite(collide(CollisionModel::reference(4, 0.5, 1.0, seed), in1, in2)).value > 0.01) ++entangled;
        worst_free = std::max(worst_free, sq_bipartite(collide(CollisionModel::reference(4, 0.0, 1.0, seed), in1, in2)).value);
    }
    return {entangled >= 95 && worst_free <= 1e-9,
            fmt("%.0f/100 collisions above 0.01, max uncoupled S_q = %.3g", entangled, worst_free)};
}

Outcome gas_production() {
    GasOptions opt;
    const auto coupled = gas_run(3, 2, 20, CollisionModel::reference(2, 0.5, 1.0, 9), 9, opt);
    const auto control = gas_run(3, 2, 20, CollisionModel::reference(2, 0.0, 1.0, 9), 9, opt);
    const double final_value = coupled.sq_estimates.back();
    const double control_max = *std::max_element(control.sq_estimates.begin(), control.sq_estimates.end());
    return {final_value > 0.0 && control_max <= 1e-6,
            fmt("final estimate = %.6g, max control estimate = %.3g", final_value, control_max)};
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "bipartite minimum: sampled lower bound and attainment", 60.0, oracle_lower_bound},
        {2, "proof chain C(x)D >= C(x)1 >= A(x)1 = A(x)B", 30.0, proof_chain},
        {3, "convexity bound", 10.0, convexity_bound},
        {4, "scheme monotonicity under coarsening", 1.0, scheme_monotonicity},
        {5, "factorized in-states have zero S_q", 30.0, factorized_in_state},
        {6, "degenerate orbit of the Bell state", 5.0, degenerate_orbit_check},
        {7, "search agrees with the closed form on 4x4", 60.0, search_agreement},
        {8, "collisions produce S_q", 30.0, entanglement_production},
        {9, "gas keeps producing S_q", 60.0, gas_production},
    };

    int failures = 0;
    for (const auto &c : criteria) {
        const auto start   = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception &e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time   = seconds < c.time_limit;
        const bool pass      = outcome.ok && in_time;
        if (!pass) ++failures;
        std::printf("[%s] criterion %d: %s | %s | %.2fs (limit %.0fs)%s\n", pass ? "PASS" : "FAIL", c.number, c.title,
                    outcome.detail.c_str(), seconds, c.time_limit, in_time ? "" : " TIMEOUT");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
