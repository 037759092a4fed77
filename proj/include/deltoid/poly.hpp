#ifndef DELTOID_POLY_HPP
#define DELTOID_POLY_HPP

#include <cstddef>
#include <vector>

#include "deltoid/scaled_complex.hpp"

namespace deltoid {

// The deltoid polynomials P_n satisfy
//
//     P_0 = 1,  P_1 = z,  P_2 = z^2,
//     P_{n+1}(z) = (3/2) z P_n(z) - (1/2) P_{n-2}(z)   for n >= 2.
//
// |P_n| <= 1 on the closed region bounded by the deltoid
// gamma(t) = (2/3) e^{it} + (1/3) e^{-2it}, and grows at least like
// (1/3)(1 + sqrt(eps))^n on the circle |z| = 1 + eps.

/// P_n(z) by direct recurrence. Throws OverflowError if the result is not finite.
Complex eval_P(std::size_t n, Complex z);

/// P_n(z) without overflow; the recurrence window is renormalized by powers of two.
ScaledComplex eval_P_scaled(std::size_t n, Complex z);

/// P_0(z), ..., P_{n_max}(z) in one pass.
std::vector<ScaledComplex> eval_P_sequence(std::size_t n_max, Complex z);

/// Point on the deltoid boundary curve; t is taken modulo 2*pi.
Complex gamma_point(double t);

struct DeltoidRegion {
    double root_tolerance = 1e-9;
    std::size_t boundary_samples = 4096;

    // Throws DomainError when the invariants do not hold.
    void validate() const;
};

/// Membership in the closed deltoid region.
///
/// z lies outside the region exactly when the characteristic cubic
/// w^3 - (3/2) z w^2 + 1/2 has a root of modulus greater than one. Points
/// within root_tolerance of a cusp are classified as inside.
bool in_deltoid(Complex z, const DeltoidRegion& region = {});

/// log2((1/3) (1 + sqrt(epsilon))^n). Throws DomainError unless epsilon > 0.
double growth_lower_bound(std::size_t n, double epsilon);

// Square sampling grid of cell centers. Row 0 is the top row (im = im_max),
// column 0 the leftmost (re = re_min).
struct GridSpec {
    std::size_t resolution = 512;
    double re_min = -1.0;
    double re_max = 1.0;
    double im_min = -1.0;
    double im_max = 1.0;

    Complex cell_center(std::size_t row, std::size_t col) const;
};

struct Raster {
    GridSpec grid;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values; // row-major

    double at(std::size_t row, std::size_t col) const { return values[row * cols + col]; }
};

inline constexpr double kRasterClamp = 1e6;

/// |P_n| at every cell center of the grid, clamped to kRasterClamp.
Raster raster_magnitude(std::size_t n, const GridSpec& grid = {});

} // namespace deltoid

#endif
