#ifndef DELTOID_CUBIC_HPP
#define DELTOID_CUBIC_HPP

#include <array>

#include "deltoid/scaled_complex.hpp"

namespace deltoid {

/// p_z(r) = r^3 - (3/2) z r^2 + 1/2, the characteristic polynomial of the P_n recurrence.
Complex characteristic_cubic(Complex z, Complex r);

/// Discriminant of a x^3 + b x^2 + c x + d.
Complex cubic_discriminant(Complex a, Complex b, Complex c, Complex d);

/// Roots of p_z via the depressed-cubic (Cardano) formula, each polished by
/// a Newton step when that reduces the residual.
std::array<Complex, 3> cubic_roots_general(Complex z);

// Roots and initial-value coefficients of p_z for real z = 1 + epsilon > 1,
// so that P_n(z) = c1 r1^n + c2 r2^n + c3 r3^n.
struct CubicSolution {
    double delta = 0.0;   // z^3 - 1 = 3 eps + 3 eps^2 + eps^3
    double epsilon = 0.0; // z - 1
    double z = 1.0;       // (1 + delta)^(1/3)
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    Complex discriminant{};

    /// c1 r1^n + c2 r2^n + c3 r3^n.
    double closed_form_value(unsigned n) const;
};

/// Trigonometric closed forms for the roots and coefficients at z = 1 + epsilon.
/// Throws DomainError unless epsilon > 0.
CubicSolution cubic_solution_trig(double epsilon);

/// arccot(x) = atan2(1, x), in (0, pi/2] for x >= 0.
double arccot(double x);

} // namespace deltoid

#endif
