#ifndef DELTOID_MATGEN_HPP
#define DELTOID_MATGEN_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "deltoid/matrix.hpp"

namespace deltoid {

/// 4x4 test matrix diag(101/100, 1) (+) [[0, -1/3], [1/3, 0]] with
/// eigenvalues 1.01, 1, i/3, -i/3.
DenseMatrix toy_matrix();

/// Column-stochastic random walk on a barbell graph: two independent n x n
/// Bernoulli(p) adjacency blocks joined by the bridge entries (n-1, n) and
/// (n, n-1). Columns of the adjacency matrix with no entries receive a
/// self-loop before normalization. The result has dimension 2n and depends
/// only on (n, p, seed).
CsrMatrix barbell_matrix(std::size_t n, double p, std::uint64_t seed);

/// Deterministic start vector: entries uniform in [0, 1), normalized.
std::vector<double> seeded_start_vector(std::size_t dimension, std::uint64_t seed);

struct Eigenpair {
    double lambda = 0.0;
    std::vector<double> phi; // unit vector
    double residual = 0.0;   // ||A phi - lambda phi||
    std::size_t iterations = 0;
    bool certified = false;  // residual <= tol |lambda|
};

/// Dominant eigenpair by the plain power method, stopping as soon as
/// ||A x - nu x|| <= tol |nu|. When max_iters is exhausted the best iterate
/// seen is returned with certified = false.
Eigenpair reference_eigenpair(const LinearOperator& a, double tol, std::size_t max_iters,
                              std::uint64_t seed = 0);

/// Stationary vector of a column-stochastic matrix from a sparse LU solve of
/// (P - I) x = 0 with the last equation replaced by sum(x) = 1. The result is
/// normalized to unit 2-norm and certified by the same residual test as
/// reference_eigenpair.
Eigenpair stationary_eigenpair(const CsrMatrix& p, double tol);

} // namespace deltoid

#endif
