#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "deltoid/errors.hpp"
#include "deltoid/matgen.hpp"
#include "deltoid/matrix.hpp"
#include "deltoid/poly.hpp"
#include "support/oracles.hpp"

using namespace deltoid;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    std::vector<double> v(n);
    for (double& x : v) {
        x = g(rng);
    }
    return v;
}

CsrMatrix random_sparse(std::size_t n, double density, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;
    std::vector<Triplet> entries;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (u(rng) < density) {
                entries.push_back({i, j, g(rng)});
            }
        }
    }
    std::shuffle(entries.begin(), entries.end(), rng);
    return CsrMatrix::from_triplets(n, std::move(entries));
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace

TEST_CASE("DenseMatrix construction and apply", "[matrix]")
{
    CHECK_THROWS_AS(DenseMatrix(2, {1.0, 2.0, 3.0}), DimensionError);
    CHECK_THROWS_AS(DenseMatrix(1, {NAN}), DomainError);
    CHECK_THROWS_AS(DenseMatrix(1, {INFINITY}), DomainError);

    const DenseMatrix a(2, {1.0, 2.0, 3.0, 4.0});
    CHECK(a(1, 0) == 3.0);
    CHECK(a.apply(std::vector<double>{1.0, 1.0}) == std::vector<double>{3.0, 7.0});
    std::vector<double> y(3);
    CHECK_THROWS_AS(a.apply(std::vector<double>{1.0, 2.0}, y), DimensionError);
    CHECK_THROWS_AS(a.apply(std::vector<double>{1.0}), DimensionError);

    const DenseMatrix id = DenseMatrix::identity(5);
    const std::vector<double> x{1.0, -2.0, 3.0, 0.5, 9.0};
    CHECK(id.apply(x) == x);
}

TEST_CASE("CsrMatrix validation", "[matrix]")
{
    CHECK_NOTHROW(CsrMatrix(2, {0, 1, 2}, {1, 0}, {1.0, 1.0}));
    CHECK_THROWS_AS(CsrMatrix(2, {0, 1}, {1}, {1.0}), DimensionError);
    CHECK_THROWS_AS(CsrMatrix(2, {1, 1, 2}, {1, 0}, {1.0, 1.0}), DimensionError);
    CHECK_THROWS_AS(CsrMatrix(2, {0, 1, 3}, {1, 0}, {1.0, 1.0}), DimensionError);
    CHECK_THROWS_AS(CsrMatrix(2, {0, 2, 1}, {1, 0}, {1.0, 1.0}), DimensionError);
    CHECK_THROWS_AS(CsrMatrix(2, {0, 1, 2}, {2, 0}, {1.0, 1.0}), DimensionError);
    CHECK_THROWS_AS(CsrMatrix(2, {0, 2, 2}, {1, 1}, {1.0, 1.0}), DimensionError);
    CHECK_THROWS_AS(CsrMatrix(2, {0, 2, 2}, {1, 0}, {1.0, 1.0}), DimensionError);
    CHECK_THROWS_AS(CsrMatrix(2, {0, 1, 2}, {1, 0}, {1.0}), DimensionError);

    CHECK_THROWS_AS(CsrMatrix::from_triplets(2, {{0, 0, 1.0}, {0, 0, 2.0}}), DimensionError);
    CHECK_THROWS_AS(CsrMatrix::from_triplets(2, {{0, 2, 1.0}}), DimensionError);
}

TEST_CASE("CsrMatrix accessors", "[matrix]")
{
    const CsrMatrix m = CsrMatrix::from_triplets(3, {{2, 0, 5.0}, {0, 2, 1.5}, {0, 0, -1.0}, {1, 1, 2.0}});
    CHECK(m.nnz() == 4);
    CHECK(m.row_offsets() == std::vector<std::size_t>{0, 2, 3, 4});
    CHECK(m.col_indices() == std::vector<std::size_t>{0, 2, 1, 0});
    CHECK(m.coeff(0, 2) == 1.5);
    CHECK(m.coeff(2, 0) == 5.0);
    CHECK(m.coeff(1, 0) == 0.0);
    CHECK(m.column_sums() == std::vector<double>{4.0, 2.0, 1.5});
    const DenseMatrix d = m.to_dense();
    CHECK(d(0, 0) == -1.0);
    CHECK(d(2, 2) == 0.0);
}

TEST_CASE("CSR multiply matches a dense reference", "[matrix][property]")
{
    std::mt19937_64 rng(41);
    for (std::size_t n : {1u, 2u, 7u, 50u, 200u}) {
        const CsrMatrix m = random_sparse(n, 0.1, rng);
        const std::vector<double> dense = m.to_dense().values();
        for (int trial = 0; trial < 5; ++trial) {
            const auto x = random_vector(n, rng);
            const auto y = m.apply(x);
            const auto ref = oracle::dense_multiply(dense, n, x);
            CHECK(max_abs_diff(y, ref) <= 1e-12 * std::max(1.0, oracle::norm(ref)));
        }
    }
}

TEST_CASE("operators are linear", "[matrix][property]")
{
    std::mt19937_64 rng(42);
    const CsrMatrix sparse = random_sparse(60, 0.2, rng);
    const DenseMatrix dense = sparse.to_dense();
    for (const LinearOperator* op : {static_cast<const LinearOperator*>(&sparse),
                                     static_cast<const LinearOperator*>(&dense)}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto x = random_vector(60, rng);
            const auto y = random_vector(60, rng);
            const double alpha = 1.7;
            const double beta = -0.3;
            std::vector<double> combo(60);
            for (std::size_t i = 0; i < 60; ++i) {
                combo[i] = alpha * x[i] + beta * y[i];
            }
            const auto lhs = op->apply(combo);
            const auto ax = op->apply(x);
            const auto ay = op->apply(y);
            std::vector<double> rhs(60);
            for (std::size_t i = 0; i < 60; ++i) {
                rhs[i] = alpha * ax[i] + beta * ay[i];
            }
            CHECK(max_abs_diff(lhs, rhs) <= 1e-12 * std::max(1.0, oracle::norm(rhs)));
        }
    }
}

TEST_CASE("sparse text format round trip", "[matrix][io]")
{
    std::mt19937_64 rng(43);
    const CsrMatrix m = random_sparse(30, 0.15, rng);
    std::stringstream buffer;
    write_sparse_text(buffer, m);
    std::string first_line;
    std::getline(std::stringstream(buffer.str()), first_line);
    CHECK(first_line == "30 " + std::to_string(m.nnz()));
    const CsrMatrix back = read_sparse_text(buffer);
    CHECK(back == m);
}

TEST_CASE("sparse text format errors", "[matrix][io]")
{
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_sparse_text(in);
    };
    CHECK_NOTHROW(parse("2 1\n0 1 0.5\n"));
    CHECK_NOTHROW(parse("\n2 1\n\n0 1 0.5\n\n"));
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("2\n"), ParseError);
    CHECK_THROWS_AS(parse("2 2\n0 1 0.5\n"), ParseError);
    CHECK_THROWS_AS(parse("2 1\n0 1\n"), ParseError);
    CHECK_THROWS_AS(parse("2 1\n0 x 1.0\n"), ParseError);
    CHECK_THROWS_AS(parse("2 1\n0 5 1.0\n"), ParseError);
    CHECK_THROWS_AS(parse("2 2\n0 1 1.0\n0 1 2.0\n"), ParseError);
}

TEST_CASE("toy matrix spectrum", "[matgen]")
{
    const DenseMatrix a = toy_matrix();
    REQUIRE(a.dimension() == 4);
    CHECK(a.apply(std::vector<double>{1, 0, 0, 0}) == std::vector<double>{1.01, 0, 0, 0});
    CHECK(a.apply(std::vector<double>{0, 1, 0, 0}) == std::vector<double>{0, 1, 0, 0});
    // rotation block: A (e3 - i e4) = (i/3)(e3 - i e4)
    const auto a3 = a.apply(std::vector<double>{0, 0, 1, 0});
    const auto a4 = a.apply(std::vector<double>{0, 0, 0, 1});
    const Complex i(0.0, 1.0);
    for (std::size_t r = 0; r < 4; ++r) {
        const Complex lhs = a3[r] - i * a4[r];
        const Complex v = r == 2 ? Complex(1.0) : r == 3 ? -i : Complex(0.0);
        CHECK(std::abs(lhs - i / 3.0 * v) <= 1e-16);
    }
    // the nondominant eigenvalues scaled by the second lie in the deltoid
    CHECK(in_deltoid(Complex(0.0, 1.0 / 3.0)));
    CHECK(in_deltoid(Complex(0.0, -1.0 / 3.0)));
}

TEST_CASE("barbell matrix structure", "[matgen]")
{
    const std::size_t n = 300;
    const double p = 0.05;
    const CsrMatrix m = barbell_matrix(n, p, 5);
    REQUIRE(m.dimension() == 2 * n);
    for (double s : m.column_sums()) {
        CHECK_THAT(s, WithinAbs(1.0, 1e-12));
    }
    // off-diagonal blocks hold only the bridge
    for (std::size_t r = 0; r < 2 * n; ++r) {
        for (std::size_t k = m.row_offsets()[r]; k < m.row_offsets()[r + 1]; ++k) {
            const std::size_t c = m.col_indices()[k];
            CHECK(m.values()[k] > 0.0);
            if ((r < n) != (c < n)) {
                CHECK(((r == n - 1 && c == n) || (r == n && c == n - 1)));
            }
        }
    }
    CHECK(m.coeff(n - 1, n) > 0.0);
    CHECK(m.coeff(n, n - 1) > 0.0);

    // bridge entries equal 1 / (column count of the adjacency matrix)
    const auto column_count = [&](std::size_t c) {
        std::size_t count = 0;
        for (std::size_t r = 0; r < 2 * n; ++r) {
            count += m.coeff(r, c) != 0.0 ? 1 : 0;
        }
        return count;
    };
    CHECK_THAT(m.coeff(n - 1, n), WithinAbs(1.0 / static_cast<double>(column_count(n)), 1e-15));
    CHECK_THAT(m.coeff(n, n - 1), WithinAbs(1.0 / static_cast<double>(column_count(n - 1)), 1e-15));

    CHECK(barbell_matrix(n, p, 5) == m);
    CHECK_FALSE(barbell_matrix(n, p, 6) == m);
}

TEST_CASE("barbell empty columns get self-loops", "[matgen]")
{
    // very sparse: most columns of B are empty
    const CsrMatrix m = barbell_matrix(20, 0.01, 3);
    int loops = 0;
    for (std::size_t c = 0; c < 40; ++c) {
        CHECK_THAT(m.column_sums()[c], WithinAbs(1.0, 1e-15));
        if (m.coeff(c, c) == 1.0) {
            ++loops;
        }
    }
    CHECK(loops > 10);
}

TEST_CASE("barbell argument validation", "[matgen]")
{
    CHECK_THROWS_AS(barbell_matrix(1, 0.5, 1), DomainError);
    CHECK_THROWS_AS(barbell_matrix(10, 0.0, 1), DomainError);
    CHECK_THROWS_AS(barbell_matrix(10, 1.0, 1), DomainError);
    CHECK_THROWS_AS(barbell_matrix(10, NAN, 1), DomainError);
}

TEST_CASE("barbell sparsity at desk scale", "[matgen][property]")
{
    const std::size_t n = 2000;
    const double p = 1.0 / 125.0;
    const double expected = 2.0 * p * n * n + 2.0;
    const double slack = 5.0 * std::sqrt(2.0 * p * n * n);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const CsrMatrix m = barbell_matrix(n, p, seed);
        INFO("seed = " << seed);
        CHECK(std::abs(static_cast<double>(m.nnz()) - expected) <= slack);
    }
}

TEST_CASE("seeded start vector", "[matgen]")
{
    const auto v = seeded_start_vector(100, 4);
    CHECK_THAT(oracle::norm(v), WithinAbs(1.0, 1e-15));
    for (double x : v) {
        CHECK(x >= 0.0);
    }
    CHECK(seeded_start_vector(100, 4) == v);
    CHECK(seeded_start_vector(100, 5) != v);
}

TEST_CASE("reference eigenpair of the toy matrix", "[matgen]")
{
    const DenseMatrix a = toy_matrix();
    const Eigenpair e = reference_eigenpair(a, 1e-12, 100000);
    CHECK(e.certified);
    CHECK_THAT(e.lambda, WithinAbs(1.01, 1e-10));
    CHECK_THAT(e.phi[0], WithinAbs(1.0, 1e-8));
    for (std::size_t i = 1; i < 4; ++i) {
        CHECK_THAT(e.phi[i], WithinAbs(0.0, 1e-8));
    }
    // residual recomputed from scratch
    const auto image = a.apply(e.phi);
    std::vector<double> r(4);
    for (std::size_t i = 0; i < 4; ++i) {
        r[i] = image[i] - e.lambda * e.phi[i];
    }
    CHECK_THAT(oracle::norm(r), WithinAbs(e.residual, 1e-15));
    CHECK(oracle::norm(r) <= 1e-12 * std::abs(e.lambda));
}

TEST_CASE("reference eigenpair edge cases", "[matgen]")
{
    const Eigenpair id = reference_eigenpair(DenseMatrix::identity(6), 1e-12, 10);
    CHECK(id.certified);
    CHECK(id.iterations == 1);
    CHECK(id.residual == 0.0);
    CHECK_THAT(id.lambda, WithinAbs(1.0, 1e-15));
    CHECK_THAT(oracle::norm(id.phi), WithinAbs(1.0, 1e-15));

    // not enough iterations: best iterate returned and flagged
    const Eigenpair rough = reference_eigenpair(toy_matrix(), 1e-12, 20);
    CHECK_FALSE(rough.certified);
    CHECK(rough.iterations <= 20);
    CHECK(rough.residual > 1e-12);

    CHECK_THROWS_AS(reference_eigenpair(toy_matrix(), 0.0, 10), DomainError);
    CHECK_THROWS_AS(reference_eigenpair(toy_matrix(), 1e-6, 0), DomainError);
    const DenseMatrix zero(2, {0.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(reference_eigenpair(zero, 1e-6, 10), BreakdownError);
}

TEST_CASE("dominant eigenvalue of a barbell matrix is one", "[matgen]")
{
    const CsrMatrix small = barbell_matrix(50, 0.3, 2);
    const Eigenpair power = reference_eigenpair(small, 1e-13, 200000);
    CHECK(power.certified);
    CHECK_THAT(power.lambda, WithinAbs(1.0, 1e-10));

    const Eigenpair direct = stationary_eigenpair(small, 1e-12);
    CHECK(direct.certified);
    CHECK_THAT(direct.lambda, WithinAbs(1.0, 1e-10));
    double diff = 0.0;
    for (std::size_t i = 0; i < direct.phi.size(); ++i) {
        diff = std::max(diff, std::abs(direct.phi[i] - power.phi[i]));
    }
    CHECK(diff <= 1e-9);
    for (double x : direct.phi) {
        CHECK(x > 0.0);
    }
}
