#include "sqt/schemes.hpp"

#include "sqt/errors.hpp"
#include "sqt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sqt {

Scheme::Scheme(std::vector<std::string> events, std::vector<double> weights)
    : events_(std::move(events)), weights_(std::move(weights)) {
    if (weights_.empty()) throw InvalidInput("a scheme needs at least one event");
    if (events_.size() != weights_.size()) throw InvalidInput("events and weights differ in length");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0 && w <= 1.0)) throw InvalidInput("scheme weight outside [0, 1]");
        sum += w;
    }
    if (std::abs(sum - 1.0) > tol::norm) throw InvalidInput("scheme weights do not sum to 1");
}

Scheme Scheme::from_weights(std::vector<double> weights) {
    std::vector<std::string> events;
    events.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) events.push_back(std::to_string(i));
    return Scheme(std::move(events), std::move(weights));
}

Partition Partition::singletons(std::size_t n) {
    Partition p;
    for (std::size_t i = 0; i < n; ++i) p.groups.push_back({i});
    return p;
}

Partition Partition::whole(std::size_t n) {
    Partition p;
    p.groups.emplace_back();
    for (std::size_t i = 0; i < n; ++i) p.groups.front().push_back(i);
    return p;
}

void Partition::validate(std::size_t n) const {
    std::vector<bool> seen(n, false);
    std::size_t covered = 0;
    for (const auto &group : groups) {
        if (group.empty()) throw InvalidPartition("partition contains an empty group");
        for (auto idx : group) {
            if (idx >= n) throw InvalidPartition("partition index " + std::to_string(idx) + " out of range");
            if (seen[idx]) throw InvalidPartition("partition groups overlap at index " + std::to_string(idx));
            seen[idx] = true;
            ++covered;
        }
    }
    if (covered != n) throw InvalidPartition("partition does not cover every event");
}

double shannon_entropy(std::span<const double> probabilities) {
    double s = 0.0;
    for (double p : probabilities)
        if (p > 0.0) s -= p * std::log(p);
    return s;
}

double entropy(const Scheme &s) { return shannon_entropy(s.weights()); }

Scheme coarsen(const Scheme &fine, const Partition &p) {
    p.validate(fine.size());
    std::vector<std::string> events;
    std::vector<double> weights;
    for (const auto &group : p.groups) {
        std::string label = "{";
        double w          = 0.0;
        for (std::size_t k = 0; k < group.size(); ++k) {
            if (k > 0) label += ",";
            label += fine.events()[group[k]];
            w += fine.weights()[group[k]];
        }
        events.push_back(label + "}");
        weights.push_back(std::min(w, 1.0));
    }
    return Scheme(std::move(events), std::move(weights));
}

bool is_finer(const Scheme &fine, const Scheme &coarse, const Partition &p) {
    const Scheme merged = coarsen(fine, p);
    if (merged.size() != coarse.size()) return false;
    for (std::size_t g = 0; g < merged.size(); ++g)
        if (std::abs(merged.weights()[g] - coarse.weights()[g]) > tol::norm) return false;
    return true;
}

bool is_valid_chain(const RefinementChain &chain) {
    if (chain.schemes.empty() || chain.partitions.size() + 1 != chain.schemes.size()) return false;
    for (std::size_t k = 0; k < chain.partitions.size(); ++k)
        if (!is_finer(chain.schemes[k], chain.schemes[k + 1], chain.partitions[k])) return false;
    return true;
}

} // namespace sqt
