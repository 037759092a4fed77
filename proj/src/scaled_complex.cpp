#include "deltoid/scaled_complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace deltoid {

ScaledComplex::ScaledComplex(Complex value, double log2_scale)
    : mantissa_(value), log2_scale_(log2_scale)
{
    normalize();
}

void ScaledComplex::normalize()
{
    const double magnitude = std::abs(mantissa_);
    if (magnitude == 0.0) {
        mantissa_ = Complex{};
        log2_scale_ = 0.0;
        return;
    }
    const int exponent = std::ilogb(magnitude);
    mantissa_ = Complex{std::ldexp(mantissa_.real(), -exponent), std::ldexp(mantissa_.imag(), -exponent)};
    log2_scale_ += exponent;
}

double ScaledComplex::log2_abs() const
{
    if (is_zero()) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log2(std::abs(mantissa_)) + log2_scale_;
}

double ScaledComplex::log_abs() const
{
    return log2_abs() * std::numbers::ln2;
}

namespace {

// 2^scale split into an exact integer power and a fractional factor.
double scale_factor_fraction(double scale, int& whole)
{
    const double clamped = std::clamp(scale, -4096.0, 4096.0);
    const double floor_part = std::floor(clamped);
    whole = static_cast<int>(floor_part);
    return std::exp2(clamped - floor_part);
}

} // namespace

Complex ScaledComplex::value() const
{
    if (is_zero()) {
        return {};
    }
    int whole = 0;
    const Complex m = mantissa_ * scale_factor_fraction(log2_scale_, whole);
    // ldexp saturates to +-inf or 0 outside the exponent range.
    return {std::ldexp(m.real(), whole), std::ldexp(m.imag(), whole)};
}

double ScaledComplex::abs() const
{
    if (is_zero()) {
        return 0.0;
    }
    int whole = 0;
    const double m = std::abs(mantissa_) * scale_factor_fraction(log2_scale_, whole);
    return std::ldexp(m, whole);
}

} // namespace deltoid
