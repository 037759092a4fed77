#include "deltoid/cubic.hpp"

#include <cmath>
#include <numbers>

#include "deltoid/errors.hpp"

namespace deltoid {

Complex characteristic_cubic(Complex z, Complex r)
{
    return r * r * (r - 1.5 * z) + 0.5;
}

Complex cubic_discriminant(Complex a, Complex b, Complex c, Complex d)
{
    return 18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * a * c * c * c - 27.0 * a * a * d * d;
}

namespace {

Complex polish(Complex z, Complex r)
{
    for (int step = 0; step < 2; ++step) {
        const Complex value = characteristic_cubic(z, r);
        const Complex slope = 3.0 * r * (r - z);
        if (slope == Complex{}) {
            break;
        }
        const Complex candidate = r - value / slope;
        if (!(std::abs(characteristic_cubic(z, candidate)) < std::abs(value))) {
            break;
        }
        r = candidate;
    }
    return r;
}

} // namespace

std::array<Complex, 3> cubic_roots_general(Complex z)
{
    // r = s + z/2 turns p_z into s^3 + p s + q.
    const Complex p = -0.75 * z * z;
    const Complex q = 0.5 - 0.25 * z * z * z;
    const Complex root_disc = std::sqrt(0.25 * q * q + p * p * p / 27.0);

    // Take the larger of -q/2 +- sqrt(...) to avoid cancellation.
    const Complex plus = -0.5 * q + root_disc;
    const Complex minus = -0.5 * q - root_disc;
    const Complex radicand = std::abs(plus) >= std::abs(minus) ? plus : minus;

    const Complex shift = 0.5 * z;
    if (radicand == Complex{}) {
        return {shift, shift, shift};
    }
    const Complex u = std::pow(radicand, 1.0 / 3.0);
    const Complex v = -p / (3.0 * u);
    const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    const Complex omega2 = std::conj(omega);

    return {polish(z, u + v + shift), polish(z, omega * u + omega2 * v + shift),
            polish(z, omega2 * u + omega * v + shift)};
}

double arccot(double x)
{
    return std::atan2(1.0, x);
}

CubicSolution cubic_solution_trig(double epsilon)
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw DomainError("cubic_solution_trig: epsilon must be positive and finite");
    }
    CubicSolution s;
    s.epsilon = epsilon;
    s.delta = epsilon * (3.0 + epsilon * (3.0 + epsilon));
    s.z = std::cbrt(1.0 + s.delta);

    constexpr double third_turn = 2.0 * std::numbers::pi / 3.0;
    const double angle = arccot(std::sqrt(s.delta));
    const double root_scale = 0.5 * s.z;
    s.r1 = root_scale * (1.0 + 2.0 * std::cos(2.0 * angle / 3.0));
    s.r2 = root_scale * (1.0 + 2.0 * std::cos(2.0 * angle / 3.0 + third_turn));
    s.r3 = root_scale * (1.0 + 2.0 * std::cos(2.0 * angle / 3.0 - third_turn));

    const double coeff_scale = std::sqrt(1.0 + s.delta);
    s.c1 = (1.0 + coeff_scale * std::sin(angle / 3.0)) / 3.0;
    s.c2 = (1.0 + coeff_scale * std::sin(angle / 3.0 - third_turn)) / 3.0;
    s.c3 = (1.0 + coeff_scale * std::sin(angle / 3.0 + third_turn)) / 3.0;

    s.discriminant = cubic_discriminant(1.0, -1.5 * s.z, 0.0, 0.5);
    return s;
}

double CubicSolution::closed_form_value(unsigned n) const
{
    const double e = static_cast<double>(n);
    return c1 * std::pow(r1, e) + c2 * std::pow(r2, e) + c3 * std::pow(r3, e);
}

} // namespace deltoid
