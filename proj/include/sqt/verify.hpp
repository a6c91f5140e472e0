#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace sqt {

struct VerifyConfig {
    std::size_t samples               = 200; // instances per property
    std::size_t observables_per_state = 50;  // product observables drawn per state in the lower-bound check
    std::size_t max_dim               = 6;   // factor dimensions are drawn from [2, max_dim]
    double tolerance                  = 1e-10; // slack on inequalities; equalities use 1e-12
    std::uint64_t seed                = 1;

    // Throws InvalidInput on a zero sample count, a negative tolerance or max_dim outside [2, 8].
    void validate() const;
};

struct PropertyOutcome {
    std::string name;
    bool passed = true;
    std::size_t samples = 0;
    // Largest signed excess of the checked quantity over its bound; <= threshold means pass.
    double worst_violation = 0.0;
    double threshold       = 0.0;
};

struct VerifyReport {
    std::vector<PropertyOutcome> properties;
    bool all_passed() const;
};

// Scheme and operator monotonicity, the proof chain of the bipartite minimum, the convexity bound,
// degenerate normal-form orbits and the sampled lower bound with attainment.
VerifyReport run_verification(const VerifyConfig &config);

} // namespace sqt
