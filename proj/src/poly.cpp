#include "deltoid/poly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "deltoid/cubic.hpp"
#include "deltoid/errors.hpp"

namespace deltoid {

namespace {

constexpr int kWindowExponent = 512;

double max_component(Complex v)
{
    return std::max(std::abs(v.real()), std::abs(v.imag()));
}

Complex ldexp(Complex v, int e)
{
    return {std::ldexp(v.real(), e), std::ldexp(v.imag(), e)};
}

// Runs the recurrence for P_0..P_n, calling visit(k, mantissa, log2_scale)
// for each k. The z argument is split as z = zm * 2^ez (ez > 0 only) so that
// the window holds Q_k = P_k / 2^(ez k), which obeys
//     Q_{k+1} = (3/2) zm Q_k - (1/2) 2^(-3 ez) Q_{k-2}.
// The shared window scale is adjusted by powers of two whenever its largest
// entry leaves [2^-512, 2^512].
template <class Visitor>
void run_scaled_recurrence(std::size_t n, Complex z, Visitor&& visit)
{
    int ez = 0;
    if (max_component(z) > 1.0) {
        ez = std::ilogb(std::abs(z));
    }
    const Complex zm = ldexp(z, -ez);
    const double lag_factor = std::ldexp(0.5, -3 * ez);

    std::array<Complex, 3> window{Complex{1.0}, zm, zm * zm}; // Q_{k-2}, Q_{k-1}, Q_k
    double window_scale = 0.0;

    const auto emit = [&](std::size_t k, Complex q) {
        visit(k, q, window_scale + static_cast<double>(ez) * static_cast<double>(k));
    };

    emit(0, window[0]);
    if (n >= 1) {
        emit(1, window[1]);
    }
    if (n >= 2) {
        emit(2, window[2]);
    }
    for (std::size_t k = 2; k < n; ++k) {
        const Complex next = 1.5 * zm * window[2] - lag_factor * window[0];
        window = {window[1], window[2], next};

        const double largest = std::max({max_component(window[0]), max_component(window[1]),
                                         max_component(window[2])});
        if (largest > std::ldexp(1.0, kWindowExponent) ||
            (largest > 0.0 && largest < std::ldexp(1.0, -kWindowExponent))) {
            const int shift = std::ilogb(largest);
            for (auto& entry : window) {
                entry = ldexp(entry, -shift);
            }
            window_scale += shift;
        }
        emit(k + 1, window[2]);
    }
}

} // namespace

Complex eval_P(std::size_t n, Complex z)
{
    if (n == 0) {
        return 1.0;
    }
    if (n == 1) {
        return z;
    }
    Complex p0 = 1.0;
    Complex p1 = z;
    Complex p2 = z * z;
    for (std::size_t k = 2; k < n; ++k) {
        const Complex next = 1.5 * z * p2 - 0.5 * p0;
        p0 = p1;
        p1 = p2;
        p2 = next;
    }
    if (!std::isfinite(p2.real()) || !std::isfinite(p2.imag())) {
        throw OverflowError("P_" + std::to_string(n) + " overflows double precision; use eval_P_scaled");
    }
    return p2;
}

ScaledComplex eval_P_scaled(std::size_t n, Complex z)
{
    ScaledComplex result;
    run_scaled_recurrence(n, z, [&](std::size_t k, Complex q, double scale) {
        if (k == n) {
            result = ScaledComplex(q, scale);
        }
    });
    return result;
}

std::vector<ScaledComplex> eval_P_sequence(std::size_t n_max, Complex z)
{
    std::vector<ScaledComplex> out;
    out.reserve(n_max + 1);
    run_scaled_recurrence(n_max, z, [&](std::size_t, Complex q, double scale) { out.emplace_back(q, scale); });
    return out;
}

Complex gamma_point(double t)
{
    const double reduced = std::fmod(t, 2.0 * std::numbers::pi);
    return std::polar(2.0 / 3.0, reduced) + std::polar(1.0 / 3.0, -2.0 * reduced);
}

void DeltoidRegion::validate() const
{
    if (!(root_tolerance > 0.0)) {
        throw DomainError("DeltoidRegion: root_tolerance must be positive");
    }
    if (boundary_samples < 64) {
        throw DomainError("DeltoidRegion: boundary_samples must be at least 64");
    }
}

bool in_deltoid(Complex z, const DeltoidRegion& region)
{
    region.validate();
    for (int k = 0; k < 3; ++k) {
        const Complex cusp = std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0);
        if (std::abs(z - cusp) <= region.root_tolerance) {
            return true;
        }
    }
    // The region sits inside the closed unit disk and touches it only at the cusps.
    if (std::abs(z) > 1.0) {
        return false;
    }
    const auto roots = cubic_roots_general(z);
    return std::ranges::all_of(roots, [&](Complex r) { return std::abs(r) <= 1.0 + region.root_tolerance; });
}

double growth_lower_bound(std::size_t n, double epsilon)
{
    if (!(epsilon > 0.0)) {
        throw DomainError("growth_lower_bound: epsilon must be positive");
    }
    return static_cast<double>(n) * std::log2(1.0 + std::sqrt(epsilon)) - std::log2(3.0);
}

Complex GridSpec::cell_center(std::size_t row, std::size_t col) const
{
    const double res = static_cast<double>(resolution);
    const double re = re_min + (static_cast<double>(col) + 0.5) * (re_max - re_min) / res;
    const double im = im_max - (static_cast<double>(row) + 0.5) * (im_max - im_min) / res;
    return {re, im};
}

Raster raster_magnitude(std::size_t n, const GridSpec& grid)
{
    if (grid.resolution == 0) {
        throw DomainError("raster_magnitude: resolution must be positive");
    }
    Raster raster;
    raster.grid = grid;
    raster.rows = grid.resolution;
    raster.cols = grid.resolution;
    raster.values.resize(raster.rows * raster.cols);

    const double log2_clamp = std::log2(kRasterClamp);
    for (std::size_t row = 0; row < raster.rows; ++row) {
        for (std::size_t col = 0; col < raster.cols; ++col) {
            const ScaledComplex p = eval_P_scaled(n, grid.cell_center(row, col));
            raster.values[row * raster.cols + col] = p.log2_abs() >= log2_clamp ? kRasterClamp : p.abs();
        }
    }
    return raster;
}

} // namespace deltoid
