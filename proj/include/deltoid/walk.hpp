#ifndef DELTOID_WALK_HPP
#define DELTOID_WALK_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "deltoid/scaled_complex.hpp"

namespace deltoid {

// Distribution of the walk Y_n on the states -n..n. The chain starts at 0
// and moves
//     0      -> +-1            with probability 1/2 each,
//     +-1    -> +-2 / -+2      with probability 3/4 / 1/4,
//     +-i    -> +-(i+1)        with probability 2/3,   (i >= 2)
//     +-i    -> +-(i-2)        with probability 1/3.
// Under the symmetric extension P_{-k} = P_k this makes E[P_{Y_n}(z)] = z^n.
class WalkDistribution {
public:
    /// Point mass at state 0 after zero steps.
    WalkDistribution();

    WalkDistribution(std::size_t steps, std::vector<double> probs);

    std::size_t steps() const noexcept { return steps_; }

    /// Probability of state s; zero when |s| > steps().
    double prob(long long state) const;

    /// Masses for states -steps()..steps() in order.
    const std::vector<double>& probs() const noexcept { return probs_; }

    double total_mass() const;
    double mean() const;

private:
    std::size_t steps_ = 0;
    std::vector<double> probs_;
};

/// One Markov step of the walk.
WalkDistribution step_distribution(const WalkDistribution& d);

/// Distribution of Y_n by dynamic programming, O(n^2).
WalkDistribution walk_distribution(std::size_t n);

// beta[k] = P(|Y_n| = k), so that z^n = sum_k beta[k] P_k(z).
struct BetaCoefficients {
    std::size_t n = 0;
    std::vector<double> beta;
};

BetaCoefficients beta_coeffs(std::size_t n);

/// Folds a walk distribution over |state|.
BetaCoefficients fold_absolute(const WalkDistribution& d);

/// Degree-min(floor(t sqrt(n)), n) truncation of sum_k beta[k] P_k(z).
/// Throws DomainError unless n >= 1 and t > 0.
Complex approx_monomial(Complex z, std::size_t n, double t);

/// Same as approx_monomial with precomputed coefficients for n = coeffs.n.
Complex approx_monomial(Complex z, const BetaCoefficients& coeffs, double t);

/// Two-sided tail bound 2 exp(-t^2 / 7) on P(|Y_n| >= t sqrt(n)).
double tail_bound(double t);

/// Exact tail P(|Y_n| >= t sqrt(n)) from the coefficients.
double empirical_tail(const BetaCoefficients& coeffs, double t);

inline constexpr unsigned kWalkShards = 4;

struct SimulatedWalk {
    WalkDistribution distribution;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    unsigned shards = kWalkShards;
};

/// Monte-Carlo estimate of the Y_n distribution. Trials are split across a
/// fixed number of shards; each trial draws from its own counter stream so the
/// result depends only on (n, trials, seed).
SimulatedWalk simulate_walk(std::size_t n, std::size_t trials, std::uint64_t seed);

/// Total variation distance between two distributions over walk states.
double total_variation(const WalkDistribution& a, const WalkDistribution& b);

} // namespace deltoid

#endif
