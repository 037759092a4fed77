#include "deltoid/matgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "deltoid/errors.hpp"
#include "deltoid/random.hpp"
#include "deltoid/vector_ops.hpp"

namespace deltoid {

DenseMatrix toy_matrix()
{
    // clang-format off
    return {4, {
        101.0 / 100.0, 0.0, 0.0,        0.0,
        0.0,           1.0, 0.0,        0.0,
        0.0,           0.0, 0.0,       -1.0 / 3.0,
        0.0,           0.0, 1.0 / 3.0,  0.0,
    }};
    // clang-format on
}

CsrMatrix barbell_matrix(std::size_t n, double p, std::uint64_t seed)
{
    if (n < 2) {
        throw DomainError("barbell_matrix: n must be at least 2");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("barbell_matrix: p must lie in (0, 1)");
    }
    const CounterRng rng(seed);
    const std::size_t dim = 2 * n;

    // Adjacency entries, row by row; one counter stream per diagonal block.
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(2.5 * p * static_cast<double>(n * n)) + 16);
    for (std::size_t block = 0; block < 2; ++block) {
        const std::size_t base = block * n;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (rng.uniform(block, i * n + j) < p) {
                    entries.push_back({base + i, base + j, 1.0});
                }
            }
        }
    }
    entries.push_back({n - 1, n, 1.0});
    entries.push_back({n, n - 1, 1.0});

    std::vector<double> column_sum(dim, 0.0);
    for (const auto& e : entries) {
        column_sum[e.col] += e.value;
    }
    for (std::size_t c = 0; c < dim; ++c) {
        if (column_sum[c] == 0.0) {
            entries.push_back({c, c, 1.0});
            column_sum[c] = 1.0;
        }
    }
    for (auto& e : entries) {
        e.value /= column_sum[e.col];
    }
    return CsrMatrix::from_triplets(dim, std::move(entries));
}

std::vector<double> seeded_start_vector(std::size_t dimension, std::uint64_t seed)
{
    const CounterRng rng(seed);
    std::vector<double> v(dimension);
    for (std::size_t i = 0; i < dimension; ++i) {
        v[i] = rng.uniform(0, i);
    }
    const double norm = vec::norm2(v);
    if (!(norm > 0.0)) {
        throw DomainError("seeded_start_vector: degenerate draw");
    }
    vec::scale(1.0 / norm, v);
    return v;
}

namespace {

// Flip the sign so the entry of largest magnitude is positive.
void canonical_sign(std::vector<double>& x)
{
    const auto it = std::ranges::max_element(x, {}, [](double v) { return std::abs(v); });
    if (it != x.end() && *it < 0.0) {
        vec::scale(-1.0, x);
    }
}

} // namespace

Eigenpair reference_eigenpair(const LinearOperator& a, double tol, std::size_t max_iters, std::uint64_t seed)
{
    if (!(tol > 0.0)) {
        throw DomainError("reference_eigenpair: tol must be positive");
    }
    if (max_iters == 0) {
        throw DomainError("reference_eigenpair: max_iters must be positive");
    }
    std::vector<double> x = seeded_start_vector(a.dimension(), seed);
    std::vector<double> v(a.dimension());

    Eigenpair best;
    double best_relative = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= max_iters; ++it) {
        a.apply(x, v);
        const double nu = vec::dot(v, x) / vec::dot(x, x);
        const double residual = vec::residual_norm(v, nu, x);
        const double relative = residual / std::abs(nu);
        if (relative < best_relative) {
            best_relative = relative;
            best = {nu, x, residual, it, residual <= tol * std::abs(nu)};
        }
        if (best.certified) {
            break;
        }
        const double h = vec::norm2(v);
        if (!(h > 0.0)) {
            throw BreakdownError("reference_eigenpair: iterate mapped to zero", it);
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = v[i] / h;
        }
    }
    canonical_sign(best.phi);
    return best;
}

Eigenpair stationary_eigenpair(const CsrMatrix& p, double tol)
{
    const auto n = static_cast<Eigen::Index>(p.dimension());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(p.nnz() + 2 * p.dimension());
    for (std::size_t i = 0; i + 1 < p.dimension(); ++i) {
        for (std::size_t k = p.row_offsets()[i]; k < p.row_offsets()[i + 1]; ++k) {
            triplets.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p.col_indices()[k]),
                                  p.values()[k]);
        }
        triplets.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), -1.0);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        triplets.emplace_back(n - 1, j, 1.0);
    }
    Eigen::SparseMatrix<double> system(n, n);
    system.setFromTriplets(triplets.begin(), triplets.end()); // sums duplicates

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(system);
    if (lu.info() != Eigen::Success) {
        throw BreakdownError("stationary_eigenpair: sparse LU factorization failed", 0);
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    const Eigen::VectorXd solution = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !solution.allFinite()) {
        throw BreakdownError("stationary_eigenpair: sparse LU solve failed", 0);
    }

    Eigenpair out;
    out.phi.assign(solution.data(), solution.data() + n);
    const double norm = vec::norm2(out.phi);
    vec::scale(1.0 / norm, out.phi);
    canonical_sign(out.phi);
    const std::vector<double> image = p.apply(out.phi);
    out.lambda = vec::dot(image, out.phi);
    out.residual = vec::residual_norm(image, out.lambda, out.phi);
    out.iterations = 1;
    out.certified = out.residual <= tol * std::abs(out.lambda);
    return out;
}

} // namespace deltoid
