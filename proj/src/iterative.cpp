#include "deltoid/iterative.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "deltoid/errors.hpp"
#include "deltoid/vector_ops.hpp"

namespace deltoid {

void MomentumConfig::validate() const
{
    if (iterations < 3) {
        throw DomainError("MomentumConfig: iterations must be at least 3");
    }
}

namespace {

std::vector<double> normalized_start(std::span<const double> v0, double& h0)
{
    h0 = vec::norm2(v0);
    if (!(h0 > 0.0) || !std::isfinite(h0)) {
        throw DomainError("initial vector must be nonzero and finite");
    }
    std::vector<double> x(v0.begin(), v0.end());
    vec::scale(1.0 / h0, x);
    return x;
}

// Bookkeeping shared by all methods: records, optional errors and vectors.
class TraceBuilder {
public:
    TraceBuilder(const RunOptions& options, std::size_t dimension, std::size_t iterations) : options_(options)
    {
        if (!options_.reference.empty() && options_.reference.size() != dimension) {
            throw DimensionError("reference vector length does not match operator dimension");
        }
        trace_.records.reserve(iterations);
    }

    void record(const IterationRecord& base, std::span<const double> x_k, std::span<const double> v_next,
                std::span<const double> x_next)
    {
        IterationRecord rec = base;
        if (!options_.reference.empty()) {
            rec.rel_err = relative_error(x_next, options_.reference);
        }
        trace_.records.push_back(rec);
        if (options_.keep_vectors) {
            trace_.iterates.emplace_back(x_k.begin(), x_k.end());
            trace_.products.emplace_back(v_next.begin(), v_next.end());
        }
    }

    IterationTrace finish(std::vector<double> x, bool converged)
    {
        trace_.x = std::move(x);
        trace_.converged = converged;
        return std::move(trace_);
    }

    const IterationTrace& trace() const { return trace_; }

private:
    const RunOptions& options_;
    IterationTrace trace_;
};

// v = scale * A x, together with nu = <v, x> and d = ||v - nu x||.
struct Product {
    double nu;
    double d;
};

Product apply_scaled(const LinearOperator& a, double scale, std::span<const double> x, std::span<double> v)
{
    a.apply(x, v);
    if (scale != 1.0) {
        vec::scale(scale, v);
    }
    const double nu = vec::dot(v, x);
    return {nu, vec::residual_norm(v, nu, x)};
}

double normalize_or_throw(std::span<const double> u, std::span<double> x_next, std::size_t k)
{
    const double h = vec::norm2(u);
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw BreakdownError("normalization norm vanished", k);
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        x_next[i] = u[i] / h;
    }
    return h;
}

// Callback deciding beta_k from (k, nu_k, d_k, d_{k-1}); returns nullopt to stop
// (convergence). Used by the static and dynamic second-order methods.
template <class BetaRule>
IterationTrace run_deltoid(const LinearOperator& a, std::span<const double> v0, std::size_t iterations,
                           const RunOptions& options, BetaRule&& beta_rule)
{
    if (iterations < 3) {
        throw DomainError("deltoid momentum requires at least 3 iterations");
    }
    const std::size_t n = a.dimension();
    if (v0.size() != n) {
        throw DimensionError("initial vector length does not match operator dimension");
    }
    double h0 = 0.0;
    // history[j] holds x_{k-2+j}; heights[j] holds h_{k-2+j}.
    std::array<std::vector<double>, 3> history{normalized_start(v0, h0), std::vector<double>(n),
                                               std::vector<double>(n)};
    std::array<double, 3> heights{h0, 0.0, 0.0};
    std::vector<double> v(n);
    std::vector<double> u(n);
    std::vector<double> x_next(n);
    TraceBuilder builder(options, n, iterations);

    // Two power steps on (2/3) A.
    for (std::size_t k = 0; k < 2; ++k) {
        const Product p = apply_scaled(a, 2.0 / 3.0, history[k], v);
        heights[k + 1] = normalize_or_throw(v, history[k + 1], k);
        builder.record({heights[k + 1], p.nu, p.d, 0.0, std::nullopt}, history[k], v, history[k + 1]);
    }

    double d_prev = builder.trace().records.back().d;
    bool converged = false;
    for (std::size_t k = 2; k < iterations; ++k) {
        const auto& x_k = history[2];
        const Product p = apply_scaled(a, 1.0, x_k, v);
        const std::optional<double> beta = beta_rule(k, p.nu, p.d, d_prev);
        if (!beta) {
            converged = true;
            break;
        }
        std::copy(v.begin(), v.end(), u.begin());
        vec::axpy(-*beta / (heights[2] * heights[1]), history[0], u);
        const double h_next = normalize_or_throw(u, x_next, k);
        builder.record({h_next, p.nu, p.d, *beta, std::nullopt}, x_k, v, x_next);

        std::rotate(history.begin(), history.begin() + 1, history.end());
        std::rotate(heights.begin(), heights.begin() + 1, heights.end());
        history[2].swap(x_next);
        heights[2] = h_next;
        d_prev = p.d;
    }
    return builder.finish(std::move(history[2]), converged);
}

} // namespace

IterationTrace power_method(const LinearOperator& a, std::span<const double> v0, std::size_t iterations,
                            const RunOptions& options)
{
    const std::size_t n = a.dimension();
    if (v0.size() != n) {
        throw DimensionError("initial vector length does not match operator dimension");
    }
    double h0 = 0.0;
    std::vector<double> x = normalized_start(v0, h0);
    std::vector<double> v(n);
    std::vector<double> x_next(n);
    TraceBuilder builder(options, n, iterations);
    for (std::size_t k = 0; k < iterations; ++k) {
        const Product p = apply_scaled(a, 1.0, x, v);
        const double h = normalize_or_throw(v, x_next, k);
        builder.record({h, p.nu, p.d, 0.0, std::nullopt}, x, v, x_next);
        x.swap(x_next);
    }
    return builder.finish(std::move(x), false);
}

IterationTrace deltoid_momentum(const LinearOperator& a, std::span<const double> v0, double beta,
                                std::size_t iterations, const RunOptions& options)
{
    return run_deltoid(a, v0, iterations, options,
                       [beta](std::size_t, double, double, double) -> std::optional<double> { return beta; });
}

IterationTrace dynamic_deltoid(const LinearOperator& a, std::span<const double> v0, std::size_t iterations,
                               const RunOptions& options)
{
    return run_deltoid(a, v0, iterations, options,
                       [](std::size_t, double nu, double d, double d_prev) -> std::optional<double> {
                           if (d <= kConvergedResidual) {
                               return std::nullopt;
                           }
                           // d_prev == 0 gives +inf, clamped to 1 below.
                           const double rho = std::max(std::min(d / d_prev, 1.0), kRhoFloor);
                           const double r = rate_of_rho(rho);
                           const double lambda = nu * r;
                           return deltoid_beta(lambda);
                       });
}

IterationTrace chebyshev_momentum(const LinearOperator& a, std::span<const double> v0, double beta,
                                  std::size_t iterations, const RunOptions& options)
{
    const std::size_t n = a.dimension();
    if (v0.size() != n) {
        throw DimensionError("initial vector length does not match operator dimension");
    }
    double h = 0.0;
    std::vector<double> x = normalized_start(v0, h);
    std::vector<double> x_prev(n, 0.0);
    std::vector<double> v(n);
    std::vector<double> u(n);
    std::vector<double> x_next(n);
    TraceBuilder builder(options, n, iterations);
    for (std::size_t k = 0; k < iterations; ++k) {
        const Product p = apply_scaled(a, 1.0, x, v);
        const double beta_used = k == 0 ? 0.0 : beta;
        u = v;
        if (k > 0) {
            vec::axpy(-beta / h, x_prev, u);
        }
        const double h_next = normalize_or_throw(u, x_next, k);
        builder.record({h_next, p.nu, p.d, beta_used, std::nullopt}, x, v, x_next);
        x_prev.swap(x);
        x.swap(x_next);
        h = h_next;
    }
    return builder.finish(std::move(x), false);
}

std::vector<double> augmented_apply(const LinearOperator& a, double beta, std::span<const double> y)
{
    const std::size_t n = a.dimension();
    if (y.size() != 3 * n) {
        throw DimensionError("augmented_apply: expected a vector of length 3n");
    }
    std::vector<double> out(3 * n);
    const auto y1 = y.subspan(0, n);
    const auto y2 = y.subspan(n, n);
    const auto y3 = y.subspan(2 * n, n);
    std::span<double> head(out.data(), n);
    a.apply(y1, head);
    vec::axpy(-beta, y3, head);
    std::copy(y1.begin(), y1.end(), out.begin() + static_cast<std::ptrdiff_t>(n));
    std::copy(y2.begin(), y2.end(), out.begin() + static_cast<std::ptrdiff_t>(2 * n));
    return out;
}

double rate_of_rho(double rho)
{
    if (!(rho > 0.0)) {
        throw DomainError("rate_of_rho: rho must be positive");
    }
    const double log_rho = std::log(rho);
    return 1.0 / (log_rho * log_rho + 1.0);
}

double relative_error(std::span<const std::complex<double>> x, std::span<const std::complex<double>> phi)
{
    if (x.size() != phi.size()) {
        throw DimensionError("relative_error: vector lengths differ");
    }
    double x_norm2 = 0.0;
    double phi_norm2 = 0.0;
    std::complex<double> overlap{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        x_norm2 += std::norm(x[i]);
        phi_norm2 += std::norm(phi[i]);
        overlap += phi[i] * std::conj(x[i]);
    }
    if (!(x_norm2 > 0.0) || !(phi_norm2 > 0.0)) {
        throw DomainError("relative_error: inputs must be nonzero");
    }
    const std::complex<double> coeff = overlap / x_norm2;
    double err2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        err2 += std::norm(coeff * x[i] - phi[i]);
    }
    return std::sqrt(err2 / phi_norm2);
}

double relative_error(std::span<const double> x, std::span<const double> phi)
{
    if (x.size() != phi.size()) {
        throw DimensionError("relative_error: vector lengths differ");
    }
    const double x_norm2 = vec::dot(x, x);
    const double phi_norm2 = vec::dot(phi, phi);
    if (!(x_norm2 > 0.0) || !(phi_norm2 > 0.0)) {
        throw DomainError("relative_error: inputs must be nonzero");
    }
    const double coeff = vec::dot(phi, x) / x_norm2;
    return vec::residual_norm(phi, coeff, x) / std::sqrt(phi_norm2);
}

double predicted_rate(double lambda1, double lambda_star, std::size_t iteration)
{
    const double ratio = std::abs(lambda1 / lambda_star);
    if (!(ratio > 1.0)) {
        throw DomainError("predicted_rate: requires |lambda1| > |lambda_star|");
    }
    return std::pow(1.0 + std::sqrt(ratio - 1.0), -static_cast<double>(iteration));
}

} // namespace deltoid
