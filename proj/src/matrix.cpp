#include "deltoid/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "deltoid/errors.hpp"

namespace deltoid {

std::vector<double> LinearOperator::apply(std::span<const double> x) const
{
    std::vector<double> y(dimension());
    apply(x, y);
    return y;
}

void LinearOperator::check_sizes(std::span<const double> x, std::span<double> y) const
{
    if (x.size() != dimension() || y.size() != dimension()) {
        throw DimensionError("LinearOperator::apply: vector length does not match operator dimension " +
                             std::to_string(dimension()));
    }
}

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values))
{
    if (values_.size() != n_ * n_) {
        throw DimensionError("DenseMatrix: expected n*n values");
    }
    if (!std::ranges::all_of(values_, [](double v) { return std::isfinite(v); })) {
        throw DomainError("DenseMatrix: entries must be finite");
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        values[i * n + i] = 1.0;
    }
    return {n, std::move(values)};
}

void DenseMatrix::apply(std::span<const double> x, std::span<double> y) const
{
    check_sizes(x, y);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* row = values_.data() + i * n_;
        double sum = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            sum += row[j] * x[j];
        }
        y[i] = sum;
    }
}

CsrMatrix::CsrMatrix(std::size_t n, std::vector<std::size_t> row_offsets, std::vector<std::size_t> col_indices,
                     std::vector<double> values)
    : n_(n), row_offsets_(std::move(row_offsets)), col_indices_(std::move(col_indices)), values_(std::move(values))
{
    if (row_offsets_.size() != n_ + 1 || row_offsets_.front() != 0) {
        throw DimensionError("CsrMatrix: row_offsets must have length n+1 and start at 0");
    }
    if (row_offsets_.back() != col_indices_.size() || col_indices_.size() != values_.size()) {
        throw DimensionError("CsrMatrix: row_offsets[n] must equal the number of stored entries");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        if (row_offsets_[i] > row_offsets_[i + 1]) {
            throw DimensionError("CsrMatrix: row_offsets must be nondecreasing");
        }
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            if (col_indices_[k] >= n_) {
                throw DimensionError("CsrMatrix: column index out of range in row " + std::to_string(i));
            }
            if (k > row_offsets_[i] && col_indices_[k] <= col_indices_[k - 1]) {
                throw DimensionError("CsrMatrix: columns must be strictly increasing in row " + std::to_string(i));
            }
        }
    }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t n, std::vector<Triplet> entries)
{
    std::ranges::sort(entries, [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<std::size_t> offsets(n + 1, 0);
    std::vector<std::size_t> cols;
    std::vector<double> values;
    cols.reserve(entries.size());
    values.reserve(entries.size());
    for (const auto& e : entries) {
        if (e.row >= n || e.col >= n) {
            throw DimensionError("CsrMatrix::from_triplets: index out of range");
        }
        ++offsets[e.row + 1];
        cols.push_back(e.col);
        values.push_back(e.value);
    }
    for (std::size_t i = 0; i < n; ++i) {
        offsets[i + 1] += offsets[i];
    }
    return {n, std::move(offsets), std::move(cols), std::move(values)};
}

void CsrMatrix::apply(std::span<const double> x, std::span<double> y) const
{
    check_sizes(x, y);
    for (std::size_t i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            sum += values_[k] * x[col_indices_[k]];
        }
        y[i] = sum;
    }
}

double CsrMatrix::coeff(std::size_t row, std::size_t col) const
{
    const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row]);
    const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row + 1]);
    const auto it = std::lower_bound(first, last, col);
    if (it == last || *it != col) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

std::vector<double> CsrMatrix::column_sums() const
{
    std::vector<double> sums(n_, 0.0);
    for (std::size_t k = 0; k < values_.size(); ++k) {
        sums[col_indices_[k]] += values_[k];
    }
    return sums;
}

DenseMatrix CsrMatrix::to_dense() const
{
    std::vector<double> dense(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            dense[i * n_ + col_indices_[k]] = values_[k];
        }
    }
    return {n_, std::move(dense)};
}

void write_sparse_text(std::ostream& out, const CsrMatrix& m)
{
    out << m.dimension() << ' ' << m.nnz() << '\n';
    char buffer[64];
    for (std::size_t i = 0; i < m.dimension(); ++i) {
        for (std::size_t k = m.row_offsets()[i]; k < m.row_offsets()[i + 1]; ++k) {
            const auto result = std::to_chars(buffer, buffer + sizeof(buffer), m.values()[k],
                                              std::chars_format::general, 17);
            out << i << ' ' << m.col_indices()[k] << ' ' << std::string_view(buffer, result.ptr) << '\n';
        }
    }
}

namespace {

template <class T>
T parse_field(const std::string& token, std::size_t line)
{
    T value{};
    const auto* begin = token.data();
    const auto* end = token.data() + token.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end) {
        throw ParseError("sparse matrix text: bad field '" + token + "' on line " + std::to_string(line));
    }
    return value;
}

} // namespace

CsrMatrix read_sparse_text(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    const auto next_fields = [&](std::vector<std::string>& fields) {
        while (std::getline(in, line)) {
            ++line_no;
            std::istringstream tokens(line);
            fields.clear();
            for (std::string t; tokens >> t;) {
                fields.push_back(t);
            }
            if (!fields.empty()) {
                return true;
            }
        }
        return false;
    };

    std::vector<std::string> fields;
    if (!next_fields(fields) || fields.size() != 2) {
        throw ParseError("sparse matrix text: expected header line 'n nnz'");
    }
    const auto n = parse_field<std::size_t>(fields[0], line_no);
    const auto nnz = parse_field<std::size_t>(fields[1], line_no);

    std::vector<Triplet> entries;
    entries.reserve(nnz);
    while (next_fields(fields)) {
        if (fields.size() != 3) {
            throw ParseError("sparse matrix text: expected 'row col value' on line " + std::to_string(line_no));
        }
        entries.push_back({parse_field<std::size_t>(fields[0], line_no), parse_field<std::size_t>(fields[1], line_no),
                           parse_field<double>(fields[2], line_no)});
    }
    if (entries.size() != nnz) {
        throw ParseError("sparse matrix text: header announces " + std::to_string(nnz) + " entries, found " +
                         std::to_string(entries.size()));
    }
    try {
        return CsrMatrix::from_triplets(n, std::move(entries));
    } catch (const DimensionError& e) {
        throw ParseError(std::string("sparse matrix text: ") + e.what());
    }
}

} // namespace deltoid
