#include "oracles.hpp"

#include "sqt/errors.hpp"
#include "sqt/schemes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace sqt;

namespace {

Scheme random_scheme(std::mt19937_64 &rng) {
    const std::size_t n = 1 + rng() % 12;
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto &x : w) sum += (x = (rng() % 6 == 0) ? 0.0 : expo(rng));
    if (sum == 0.0) w[0] = sum = 1.0;
    for (auto &x : w) x /= sum;
    return Scheme::from_weights(w);
}

Partition random_partition(std::size_t n, std::mt19937_64 &rng) {
    const std::size_t k = 1 + rng() % n;
    std::vector<std::vector<std::size_t>> groups(k);
    for (std::size_t i = 0; i < n; ++i) groups[rng() % k].push_back(i);
    Partition p;
    for (auto &g : groups)
        if (!g.empty()) p.groups.push_back(g);
    return p;
}

} // namespace

TEST(Scheme, Validation) {
    EXPECT_THROW(Scheme({}, {}), InvalidInput);
    EXPECT_THROW(Scheme({"a"}, {0.5, 0.5}), InvalidInput);
    EXPECT_THROW(Scheme::from_weights({0.5, 0.6}), InvalidInput);
    EXPECT_THROW(Scheme::from_weights({1.5, -0.5}), InvalidInput);
    EXPECT_NO_THROW(Scheme::from_weights({0.25, 0.75}));
}

TEST(Entropy, TrivialSchemeIsZero) { EXPECT_EQ(entropy(Scheme::from_weights({1.0})), 0.0); }

TEST(Entropy, UniformSchemeIsLogN) {
    for (std::size_t n = 1; n <= 16; ++n) {
        const Scheme s = Scheme::from_weights(std::vector<double>(n, 1.0 / static_cast<double>(n)));
        EXPECT_NEAR(entropy(s), std::log(static_cast<double>(n)), 1e-14);
    }
}

TEST(Entropy, FourEventScheme) {
    // -sum w ln w evaluated independently (double precision): 1.2798542258336676
    EXPECT_NEAR(entropy(Scheme::from_weights({0.2, 0.3, 0.1, 0.4})), 1.2798542258336676, 1e-15);
}

TEST(Entropy, ZeroWeightsContributeNothing) {
    EXPECT_EQ(entropy(Scheme::from_weights({0.0, 1.0, 0.0})), 0.0);
    EXPECT_NEAR(entropy(Scheme::from_weights({0.5, 0.0, 0.5})), std::log(2.0), 1e-15);
}

TEST(Coarsen, PairsOfEvents) {
    Partition p;
    p.groups = {{0, 1}, {2, 3}};
    const Scheme c = coarsen(Scheme::from_weights({0.2, 0.3, 0.1, 0.4}), p);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_NEAR(c.weights()[0], 0.5, 1e-15);
    EXPECT_NEAR(c.weights()[1], 0.5, 1e-15);
    EXPECT_EQ(c.events()[0], "{0,1}");
}

TEST(Coarsen, SingletonsAreIdentity) {
    const Scheme s = Scheme::from_weights({0.2, 0.3, 0.1, 0.4});
    const Scheme c = coarsen(s, Partition::singletons(4));
    EXPECT_EQ(c.weights(), s.weights());
    EXPECT_EQ(entropy(c), entropy(s));
}

TEST(Coarsen, WholeGroupIsTrivial) {
    const Scheme c = coarsen(Scheme::from_weights({0.2, 0.3, 0.1, 0.4}), Partition::whole(4));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_NEAR(c.weights()[0], 1.0, 1e-15);
}

TEST(Coarsen, InvalidPartitions) {
    const Scheme s = Scheme::from_weights({0.2, 0.3, 0.1, 0.4});
    EXPECT_THROW(coarsen(s, Partition{{{0, 1}, {1, 2, 3}}}), InvalidPartition); // overlap
    EXPECT_THROW(coarsen(s, Partition{{{0, 1}, {3}}}), InvalidPartition);       // gap
    EXPECT_THROW(coarsen(s, Partition{{{0, 1, 2, 3}, {}}}), InvalidPartition);  // empty group
    EXPECT_THROW(coarsen(s, Partition{{{0, 1, 2, 4}}}), InvalidPartition);      // out of range
}

TEST(IsFiner, Examples) {
    const Scheme fine = Scheme::from_weights({0.2, 0.3, 0.1, 0.4});
    Partition pairs;
    pairs.groups = {{0, 1}, {2, 3}};
    EXPECT_TRUE(is_finer(fine, Scheme::from_weights({0.5, 0.5}), pairs));
    EXPECT_FALSE(is_finer(Scheme::from_weights({0.5, 0.5}), Scheme::from_weights({0.6, 0.4}), Partition::singletons(2)));
    EXPECT_TRUE(is_finer(fine, Scheme::from_weights({1.0}), Partition::whole(4)));
    EXPECT_FALSE(is_finer(fine, Scheme::from_weights({0.5, 0.5}), Partition::whole(4)));
    EXPECT_THROW(is_finer(fine, fine, Partition::singletons(3)), InvalidPartition);
}

TEST(RefinementChain, ValidatesEveryLink) {
    RefinementChain chain;
    chain.schemes    = {Scheme::from_weights({0.2, 0.3, 0.1, 0.4}), Scheme::from_weights({0.5, 0.5}),
                        Scheme::from_weights({1.0})};
    chain.partitions = {Partition{{{0, 1}, {2, 3}}}, Partition::whole(2)};
    EXPECT_TRUE(is_valid_chain(chain));
    for (std::size_t k = 0; k + 1 < chain.schemes.size(); ++k)
        EXPECT_GE(entropy(chain.schemes[k]) + 1e-12, entropy(chain.schemes[k + 1]));

    chain.schemes[1] = Scheme::from_weights({0.6, 0.4});
    EXPECT_FALSE(is_valid_chain(chain));
    chain.partitions.pop_back();
    EXPECT_FALSE(is_valid_chain(chain));
}

TEST(SchemeProperties, CoarseningNeverIncreasesEntropy) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 2000; ++trial) {
        const Scheme s   = random_scheme(rng);
        const Partition p = random_partition(s.size(), rng);
        const Scheme c   = coarsen(s, p);
        ASSERT_LE(entropy(c), entropy(s) + 1e-12);
        ASSERT_TRUE(is_finer(s, c, p));
    }
}

TEST(SchemeProperties, EntropyBounds) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 2000; ++trial) {
        const Scheme s = random_scheme(rng);
        const double h = entropy(s);
        ASSERT_GE(h, 0.0);
        ASSERT_LE(h, std::log(static_cast<double>(s.size())) + 1e-12);
        ASSERT_NEAR(h, oracle::entropy(s.weights()), 1e-15);
    }
}
