#include "deltoid/walk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include "deltoid/errors.hpp"
#include "deltoid/poly.hpp"
#include "deltoid/random.hpp"

namespace deltoid {

WalkDistribution::WalkDistribution() : steps_(0), probs_{1.0} {}

WalkDistribution::WalkDistribution(std::size_t steps, std::vector<double> probs)
    : steps_(steps), probs_(std::move(probs))
{
    if (probs_.size() != 2 * steps_ + 1) {
        throw DimensionError("WalkDistribution: expected 2n+1 state masses");
    }
}

double WalkDistribution::prob(long long state) const
{
    const auto n = static_cast<long long>(steps_);
    if (state < -n || state > n) {
        return 0.0;
    }
    return probs_[static_cast<std::size_t>(state + n)];
}

double WalkDistribution::total_mass() const
{
    return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

double WalkDistribution::mean() const
{
    const auto n = static_cast<long long>(steps_);
    double sum = 0.0;
    for (long long s = -n; s <= n; ++s) {
        sum += static_cast<double>(s) * prob(s);
    }
    return sum;
}

namespace {

// Next state of the chain given a uniform draw in [0, 1).
long long next_state(long long state, double u)
{
    if (state == 0) {
        return u < 0.5 ? 1 : -1;
    }
    const long long sign = state > 0 ? 1 : -1;
    const long long magnitude = state * sign;
    if (magnitude == 1) {
        return u < 0.75 ? 2 * sign : -2 * sign;
    }
    return u < 2.0 / 3.0 ? sign * (magnitude + 1) : sign * (magnitude - 2);
}

} // namespace

namespace {

double transition(long long from, long long to)
{
    if (from == 0) {
        return std::llabs(to) == 1 ? 0.5 : 0.0;
    }
    const long long sign = from > 0 ? 1 : -1;
    if (from * sign == 1) {
        return to == 2 * sign ? 0.75 : to == -2 * sign ? 0.25 : 0.0;
    }
    return to == from + sign ? 2.0 / 3.0 : to == from - 2 * sign ? 1.0 / 3.0 : 0.0;
}

} // namespace

WalkDistribution step_distribution(const WalkDistribution& d)
{
    const auto n = static_cast<long long>(d.steps());
    const auto m = n + 1;
    std::vector<double> next(static_cast<std::size_t>(2 * m + 1), 0.0);
    // Gather into each target from sources at mirrored offsets, so that the
    // sums for s and -s run over identical terms in identical order.
    for (long long to = -m; to <= m; ++to) {
        const long long sign = to < 0 ? -1 : 1;
        double mass = 0.0;
        for (long long offset = -3; offset <= 3; ++offset) {
            const long long from = to + offset * sign;
            if (std::llabs(from) <= n) {
                mass += d.prob(from) * transition(from, to);
            }
        }
        next[static_cast<std::size_t>(to + m)] = mass;
    }
    return WalkDistribution(static_cast<std::size_t>(m), std::move(next));
}

WalkDistribution walk_distribution(std::size_t n)
{
    WalkDistribution d;
    for (std::size_t k = 0; k < n; ++k) {
        d = step_distribution(d);
    }
    return d;
}

BetaCoefficients fold_absolute(const WalkDistribution& d)
{
    BetaCoefficients out;
    out.n = d.steps();
    out.beta.assign(d.steps() + 1, 0.0);
    out.beta[0] = d.prob(0);
    for (std::size_t k = 1; k <= d.steps(); ++k) {
        const auto s = static_cast<long long>(k);
        out.beta[k] = d.prob(s) + d.prob(-s);
    }
    return out;
}

BetaCoefficients beta_coeffs(std::size_t n)
{
    return fold_absolute(walk_distribution(n));
}

Complex approx_monomial(Complex z, const BetaCoefficients& coeffs, double t)
{
    if (coeffs.n < 1) {
        throw DomainError("approx_monomial: n must be at least 1");
    }
    if (!(t > 0.0)) {
        throw DomainError("approx_monomial: t must be positive");
    }
    const double cutoff = std::floor(t * std::sqrt(static_cast<double>(coeffs.n)));
    const std::size_t degree =
        cutoff >= static_cast<double>(coeffs.n) ? coeffs.n : static_cast<std::size_t>(cutoff);

    const auto basis = eval_P_sequence(degree, z);
    Complex sum{};
    for (std::size_t k = 0; k <= degree; ++k) {
        if (coeffs.beta[k] != 0.0) {
            sum += coeffs.beta[k] * basis[k].value();
        }
    }
    return sum;
}

Complex approx_monomial(Complex z, std::size_t n, double t)
{
    if (n < 1) {
        throw DomainError("approx_monomial: n must be at least 1");
    }
    return approx_monomial(z, beta_coeffs(n), t);
}

double tail_bound(double t)
{
    if (!(t > 0.0)) {
        throw DomainError("tail_bound: t must be positive");
    }
    return 2.0 * std::exp(-t * t / 7.0);
}

double empirical_tail(const BetaCoefficients& coeffs, double t)
{
    const double threshold = t * std::sqrt(static_cast<double>(coeffs.n));
    double tail = 0.0;
    for (std::size_t k = 0; k < coeffs.beta.size(); ++k) {
        if (static_cast<double>(k) >= threshold) {
            tail += coeffs.beta[k];
        }
    }
    return tail;
}

SimulatedWalk simulate_walk(std::size_t n, std::size_t trials, std::uint64_t seed)
{
    if (trials == 0) {
        throw DomainError("simulate_walk: trials must be positive");
    }
    const CounterRng rng(seed);
    const auto width = 2 * n + 1;
    std::vector<std::vector<std::uint64_t>> counts(kWalkShards, std::vector<std::uint64_t>(width, 0));

    const auto run_shard = [&](unsigned shard) {
        const std::size_t begin = trials * shard / kWalkShards;
        const std::size_t end = trials * (shard + 1) / kWalkShards;
        auto& local = counts[shard];
        for (std::size_t trial = begin; trial < end; ++trial) {
            long long state = 0;
            for (std::size_t step = 0; step < n; ++step) {
                state = next_state(state, rng.uniform(trial, step));
            }
            ++local[static_cast<std::size_t>(state + static_cast<long long>(n))];
        }
    };

    {
        std::vector<std::jthread> workers;
        workers.reserve(kWalkShards);
        for (unsigned shard = 0; shard < kWalkShards; ++shard) {
            workers.emplace_back(run_shard, shard);
        }
    }

    std::vector<double> probs(width, 0.0);
    for (std::size_t s = 0; s < width; ++s) {
        std::uint64_t total = 0;
        for (const auto& shard : counts) {
            total += shard[s];
        }
        probs[s] = static_cast<double>(total) / static_cast<double>(trials);
    }
    return {WalkDistribution(n, std::move(probs)), trials, seed, kWalkShards};
}

double total_variation(const WalkDistribution& a, const WalkDistribution& b)
{
    const auto n = static_cast<long long>(std::max(a.steps(), b.steps()));
    double sum = 0.0;
    for (long long s = -n; s <= n; ++s) {
        sum += std::abs(a.prob(s) - b.prob(s));
    }
    return 0.5 * sum;
}

} // namespace deltoid
