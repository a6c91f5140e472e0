#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sqt {

// A finite scheme: mutually exclusive events with probabilities summing to one.
class Scheme {
  public:
    // Throws InvalidInput on length mismatch, empty input, weights outside [0, 1] or a sum off by > 1e-12.
    Scheme(std::vector<std::string> events, std::vector<double> weights);

    // Events labelled "0", "1", ...
    static Scheme from_weights(std::vector<double> weights);

    const std::vector<std::string> &events() const { return events_; }
    const std::vector<double> &weights() const { return weights_; }
    std::size_t size() const { return weights_.size(); }

  private:
    std::vector<std::string> events_;
    std::vector<double> weights_;
};

// Disjoint groups of zero-based event indices covering 0..n-1.
struct Partition {
    std::vector<std::vector<std::size_t>> groups;

    static Partition singletons(std::size_t n);
    static Partition whole(std::size_t n);

    // Throws InvalidPartition on empty groups, overlaps, gaps or out-of-range indices.
    void validate(std::size_t n) const;
};

// -sum p ln p in nats, with 0 ln 0 = 0.
double shannon_entropy(std::span<const double> probabilities);
double entropy(const Scheme &s);

// Merges the events of each group; the merged weight is the group sum.
Scheme coarsen(const Scheme &fine, const Partition &p);

// True iff coarsening `fine` by `p` reproduces the weights of `coarse` within 1e-12, group by group.
bool is_finer(const Scheme &fine, const Scheme &coarse, const Partition &p);

// A chain of successively coarser schemes: partitions[k] maps schemes[k] onto schemes[k + 1].
struct RefinementChain {
    std::vector<Scheme> schemes;
    std::vector<Partition> partitions;
};

// Checks every adjacent link of the chain with is_finer.
bool is_valid_chain(const RefinementChain &chain);

} // namespace sqt
