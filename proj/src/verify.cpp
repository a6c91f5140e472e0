#include "sqt/verify.hpp"

#include "sqt/errors.hpp"
#include "sqt/observables.hpp"
#include "sqt/schemes.hpp"
#include "sqt/sq.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace sqt {

namespace {

constexpr double equality_tol = 1e-12;

std::size_t draw_dim(Rng &rng, std::size_t max_dim) {
    return std::uniform_int_distribution<std::size_t>(2, max_dim)(rng);
}

Scheme random_scheme(Rng &rng) {
    const auto n = std::uniform_int_distribution<std::size_t>(1, 10)(rng);
    std::exponential_distribution<double> expo(1.0);
    std::bernoulli_distribution zero(0.15);
    std::vector<double> w(n);
    for (auto &x : w) x = zero(rng) ? 0.0 : expo(rng);
    double sum = 0.0;
    for (double x : w) sum += x;
    if (sum == 0.0) {
        w[0] = sum = 1.0;
    }
    for (auto &x : w) x /= sum;
    return Scheme::from_weights(std::move(w));
}

Partition random_partition(std::size_t n, Rng &rng) {
    const auto k = std::uniform_int_distribution<std::size_t>(1, n)(rng);
    std::uniform_int_distribution<std::size_t> label(0, k - 1);
    std::vector<std::vector<std::size_t>> groups(k);
    for (std::size_t i = 0; i < n; ++i) groups[label(rng)].push_back(i);
    Partition p;
    for (auto &g : groups)
        if (!g.empty()) p.groups.push_back(std::move(g));
    return p;
}

// Haar basis with eigenvalues drawn from {1, 2}: degenerate with high probability.
PointObservable random_degenerate_observable(std::size_t dim, Rng &rng) {
    std::bernoulli_distribution coin(0.5);
    RealVector values(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = coin(rng) ? 2.0 : 1.0;
    return PointObservable(std::move(values), haar_unitary(dim, rng));
}

ProductObservable pair_of(PointObservable a, PointObservable b) {
    ProductObservable p;
    p.factors = {std::move(a), std::move(b)};
    return p;
}

class Tracker {
  public:
    Tracker(std::string name, double threshold) { out_.name = std::move(name), out_.threshold = threshold; }
    void observe(double excess) {
        out_.worst_violation = out_.samples == 0 ? excess : std::max(out_.worst_violation, excess);
        ++out_.samples;
    }
    PropertyOutcome finish() {
        out_.passed = out_.samples > 0 && out_.worst_violation <= out_.threshold;
        return out_;
    }

  private:
    PropertyOutcome out_;
};

} // namespace

void VerifyConfig::validate() const {
    if (samples == 0) throw InvalidInput("samples must be at least 1");
    if (observables_per_state == 0) throw InvalidInput("observables_per_state must be at least 1");
    if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) throw InvalidInput("tolerance must be a non-negative number");
    if (max_dim < 2 || max_dim > 8) throw InvalidInput("max_dim must lie in [2, 8]");
}

bool VerifyReport::all_passed() const {
    return std::all_of(properties.begin(), properties.end(), [](const auto &p) { return p.passed; });
}

VerifyReport run_verification(const VerifyConfig &config) {
    config.validate();
    VerifyReport report;
    Rng rng(config.seed);
    const double tol = config.tolerance;

    {
        Tracker t("scheme_monotonicity", tol::norm);
        for (std::size_t s = 0; s < config.samples; ++s) {
            const Scheme fine = random_scheme(rng);
            const Scheme coarse = coarsen(fine, random_partition(fine.size(), rng));
            t.observe(entropy(coarse) - entropy(fine));
        }
        report.properties.push_back(t.finish());
    }
    {
        // A refinement of B never has smaller measurement entropy; the identity measures nothing.
        Tracker t("operator_monotonicity", tol::norm);
        for (std::size_t s = 0; s < config.samples; ++s) {
            const auto d              = draw_dim(rng, config.max_dim);
            const PointObservable b   = random_degenerate_observable(d, rng);
            const PointObservable a   = refine_to_simple(b, rng());
            const StateVector phi     = random_state({d}, rng);
            const double fine_entropy = s_tilde(phi, ProductObservable{{a}});
            const double identity     = s_tilde(phi, ProductObservable::identity({d}));
            double excess             = s_tilde(phi, ProductObservable{{b}}) - fine_entropy;
            excess                    = std::max(excess, std::abs(identity));
            if (!is_finer_op(a, b)) excess = std::numeric_limits<double>::infinity();
            t.observe(excess);
        }
        report.properties.push_back(t.finish());
    }
    {
        Tracker chain("proof_chain", tol);
        Tracker adapt("adapted_equality", equality_tol);
        for (std::size_t s = 0; s < config.samples; ++s) {
            const auto d1 = draw_dim(rng, config.max_dim), d2 = draw_dim(rng, config.max_dim);
            const StateVector phi = random_state({d1, d2}, rng);
            const auto adapted    = adapted_pair(schmidt(phi), rng());
            const auto c          = random_simple_observable(d1, rng);
            const auto dd         = random_simple_observable(d2, rng);
            const auto one2       = PointObservable::identity(d2);

            const double s_cd = s_tilde(phi, pair_of(c, dd));
            const double s_c1 = s_tilde(phi, pair_of(c, one2));
            const double s_a1 = s_tilde(phi, pair_of(adapted.factors[0], one2));
            const double s_ab = s_tilde(phi, adapted);
            chain.observe(std::max(s_c1 - s_cd, s_a1 - s_c1));
            adapt.observe(std::abs(s_a1 - s_ab));
        }
        report.properties.push_back(chain.finish());
        report.properties.push_back(adapt.finish());
    }
    {
        Tracker t("convexity_gap", tol);
        for (std::size_t s = 0; s < config.samples; ++s) {
            const auto d1 = draw_dim(rng, config.max_dim), d2 = draw_dim(rng, config.max_dim);
            const StateVector phi = random_state({d1, d2}, rng);
            t.observe(-convexity_gap(phi, random_simple_observable(d1, rng)));
        }
        report.properties.push_back(t.finish());
    }
    {
        // Maximally entangled states: every block rotation gives another normal form with the same minimum.
        Tracker entropy_t("degenerate_orbit_entropy", equality_tol);
        Tracker recon_t("degenerate_orbit_reconstruction", tol::unitary);
        for (std::size_t s = 0; s < config.samples; ++s) {
            const auto k = draw_dim(rng, config.max_dim);
            ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(k * k));
            for (std::size_t l = 0; l < k; ++l) amps(static_cast<Eigen::Index>(l * k + l)) = 1.0;
            const StateVector phi  = StateVector::normalized({k, k}, amps);
            const SchmidtForm form = schmidt(phi);
            const SchmidtForm rotated = degenerate_orbit(form, haar_unitary(k, rng), 0);
            const double value = s_tilde(phi, adapted_pair(rotated, rng()));
            entropy_t.observe(std::abs(value - std::log(static_cast<double>(k))));
            recon_t.observe((rotated.reconstruct() - phi.amplitudes()).cwiseAbs().maxCoeff());
        }
        report.properties.push_back(entropy_t.finish());
        report.properties.push_back(recon_t.finish());
    }
    {
        Tracker lower("oracle_lower_bound", tol);
        Tracker attain("oracle_attainment", equality_tol);
        for (std::size_t s = 0; s < config.samples; ++s) {
            const auto d1 = draw_dim(rng, config.max_dim), d2 = draw_dim(rng, config.max_dim);
            const StateVector phi = random_state({d1, d2}, rng);
            const SqResult closed = sq_bipartite(phi);
            double min_sampled    = std::numeric_limits<double>::infinity();
            for (std::size_t o = 0; o < config.observables_per_state; ++o)
                min_sampled = std::min(min_sampled, s_tilde(phi, pair_of(random_simple_observable(d1, rng),
                                                                          random_simple_observable(d2, rng))));
            lower.observe(closed.value - min_sampled);
            attain.observe(std::abs(s_tilde(phi, closed.argmin) - closed.value));
        }
        report.properties.push_back(lower.finish());
        report.properties.push_back(attain.finish());
    }
    return report;
}

} // namespace sqt
