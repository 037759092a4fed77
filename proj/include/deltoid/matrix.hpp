#ifndef DELTOID_MATRIX_HPP
#define DELTOID_MATRIX_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace deltoid {

// Real square matrix acting on vectors of length dimension().
// apply() must be safe to call concurrently from several threads.
class LinearOperator {
public:
    virtual ~LinearOperator() = default;

    virtual std::size_t dimension() const = 0;

    /// y = A x. Both spans have length dimension().
    virtual void apply(std::span<const double> x, std::span<double> y) const = 0;

    std::vector<double> apply(std::span<const double> x) const;

protected:
    void check_sizes(std::span<const double> x, std::span<double> y) const;
};

class DenseMatrix final : public LinearOperator {
public:
    /// Row-major values; throws DimensionError or DomainError (non-finite entries).
    DenseMatrix(std::size_t n, std::vector<double> values);

    static DenseMatrix identity(std::size_t n);

    std::size_t dimension() const override { return n_; }
    void apply(std::span<const double> x, std::span<double> y) const override;
    using LinearOperator::apply;

    double operator()(std::size_t row, std::size_t col) const { return values_[row * n_ + col]; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    std::size_t n_;
    std::vector<double> values_;
};

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

// Compressed sparse row storage. Column indices are strictly increasing
// within each row, which also rules out duplicate (row, col) pairs.
class CsrMatrix final : public LinearOperator {
public:
    /// Throws DimensionError when the structural invariants do not hold.
    CsrMatrix(std::size_t n, std::vector<std::size_t> row_offsets, std::vector<std::size_t> col_indices,
              std::vector<double> values);

    /// Sorts the entries; throws DimensionError on out-of-range indices or duplicates.
    static CsrMatrix from_triplets(std::size_t n, std::vector<Triplet> entries);

    std::size_t dimension() const override { return n_; }
    void apply(std::span<const double> x, std::span<double> y) const override;
    using LinearOperator::apply;

    std::size_t nnz() const noexcept { return values_.size(); }

    const std::vector<std::size_t>& row_offsets() const noexcept { return row_offsets_; }
    const std::vector<std::size_t>& col_indices() const noexcept { return col_indices_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Stored value at (row, col), or 0 when absent.
    double coeff(std::size_t row, std::size_t col) const;

    /// Sum of each column.
    std::vector<double> column_sums() const;

    DenseMatrix to_dense() const;

    friend bool operator==(const CsrMatrix& a, const CsrMatrix& b)
    {
        return a.n_ == b.n_ && a.row_offsets_ == b.row_offsets_ && a.col_indices_ == b.col_indices_ &&
               a.values_ == b.values_;
    }

private:
    std::size_t n_;
    std::vector<std::size_t> row_offsets_;
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

/// Text format: a header line "n nnz", then one "row col value" triplet per
/// line, 0-indexed, values written with 17 significant digits.
void write_sparse_text(std::ostream& out, const CsrMatrix& m);

/// Parses the format produced by write_sparse_text; throws ParseError.
CsrMatrix read_sparse_text(std::istream& in);

} // namespace deltoid

#endif
