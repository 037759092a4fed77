#ifndef DELTOID_SCALED_COMPLEX_HPP
#define DELTOID_SCALED_COMPLEX_HPP

#include <complex>

namespace deltoid {

using Complex = std::complex<double>;

// A complex number stored as mantissa * 2^log2_scale.
//
// The mantissa magnitude is kept in [0.5, 2) for nonzero values; zero is the
// pair (0, 0). Only power-of-two rescalings are ever applied, so no rounding
// is introduced by normalization.
class ScaledComplex {
public:
    ScaledComplex() = default;
    ScaledComplex(Complex value, double log2_scale = 0.0);

    const Complex& mantissa() const noexcept { return mantissa_; }
    double log2_scale() const noexcept { return log2_scale_; }

    bool is_zero() const noexcept { return mantissa_ == Complex{}; }

    // log2 |value|; -infinity for zero.
    double log2_abs() const;

    // Natural log |value|; -infinity for zero.
    double log_abs() const;

    // The represented value. Overflows to infinity (or underflows to zero)
    // when the scale exceeds the double range.
    Complex value() const;

    // |value| clamped to the double range.
    double abs() const;

private:
    void normalize();

    Complex mantissa_{};
    double log2_scale_ = 0.0;
};

} // namespace deltoid

#endif
