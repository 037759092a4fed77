#ifndef DELTOID_ITERATIVE_HPP
#define DELTOID_ITERATIVE_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "deltoid/matrix.hpp"

namespace deltoid {

// One step k of a power-type iteration: the normalization h_{k+1}, the
// Rayleigh quotient nu_k = <v_{k+1}, x_k>, the residual d_k = ||v_{k+1} - nu_k x_k||
// with v_{k+1} the operator applied to x_k, the momentum parameter used to
// form x_{k+1}, and optionally the relative error of x_{k+1}.
struct IterationRecord {
    double h = 0.0;
    double nu = 0.0;
    double d = 0.0;
    double beta = 0.0;
    std::optional<double> rel_err;
};

struct IterationTrace {
    std::vector<IterationRecord> records;
    std::vector<double> x;  // final iterate
    bool converged = false; // stopped early on a vanishing residual

    // Filled only when RunOptions::keep_vectors is set: iterates[k] = x_k and
    // products[k] = v_{k+1} for each recorded step k.
    std::vector<std::vector<double>> iterates;
    std::vector<std::vector<double>> products;

    std::size_t steps() const noexcept { return records.size(); }
};

struct RunOptions {
    // Reference eigenvector; when non-empty each record carries rel_err.
    std::span<const double> reference;
    bool keep_vectors = false;
};

// Static settings shared by the experiment drivers.
struct MomentumConfig {
    std::size_t iterations = 1000;
    double beta = 0.0;
    std::uint64_t seed = 0;
    bool record_errors = true;

    // Throws DomainError unless iterations >= 3.
    void validate() const;
};

/// Residual threshold below which the dynamic method reports convergence.
inline constexpr double kConvergedResidual = 1e-15;

/// Lower bound applied to the measured rate before taking its logarithm.
inline constexpr double kRhoFloor = 1e-12;

/// Normalized power iteration: v_{k+1} = A x_k, x_{k+1} = v_{k+1} / ||v_{k+1}||.
IterationTrace power_method(const LinearOperator& a, std::span<const double> v0, std::size_t iterations,
                            const RunOptions& options = {});

/// Second-order (deltoid) momentum: two power steps on (2/3) A, then
/// u_{k+1} = A x_k - beta / (h_k h_{k-1}) x_{k-2}. With beta = 4 lambda^3 / 27 the
/// iterate x_N is the normalized P_N(A / lambda) v0.
IterationTrace deltoid_momentum(const LinearOperator& a, std::span<const double> v0, double beta,
                                std::size_t iterations, const RunOptions& options = {});

/// Deltoid momentum with beta_k = 4 (nu_k r_k)^3 / 27, where r_k is recovered
/// from the observed residual ratio through rate_of_rho. Stops early with
/// converged = true once d_k <= kConvergedResidual.
IterationTrace dynamic_deltoid(const LinearOperator& a, std::span<const double> v0, std::size_t iterations,
                               const RunOptions& options = {});

/// First-order momentum baseline: u_{k+1} = A x_k - beta / h_k x_{k-1}.
IterationTrace chebyshev_momentum(const LinearOperator& a, std::span<const double> v0, double beta,
                                  std::size_t iterations, const RunOptions& options = {});

/// Applies [[A, 0, -beta I], [I, 0, 0], [0, I, 0]] to y = (y1, y2, y3).
std::vector<double> augmented_apply(const LinearOperator& a, double beta, std::span<const double> y);

/// r(rho) = 1 / ((log rho)^2 + 1). Throws DomainError unless rho > 0.
double rate_of_rho(double rho);

/// ||(<phi, x> / ||x||^2) x - phi|| / ||phi|| with <u, w> = sum u_i conj(w_i).
/// Invariant under x -> c x for any complex c != 0. Throws DomainError on zero input.
double relative_error(std::span<const std::complex<double>> x, std::span<const std::complex<double>> phi);
double relative_error(std::span<const double> x, std::span<const double> phi);

/// Optimal static parameters for a known second eigenvalue.
inline double deltoid_beta(double lambda2)
{
    return 4.0 * lambda2 * lambda2 * lambda2 / 27.0;
}

inline double chebyshev_beta(double lambda2)
{
    return lambda2 * lambda2 / 4.0;
}

/// Predicted error envelope (1 + sqrt(|lambda1 / lambda_star| - 1))^(-N).
double predicted_rate(double lambda1, double lambda_star, std::size_t iteration);

} // namespace deltoid

#endif
