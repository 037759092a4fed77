#ifndef DELTOID_VECTOR_OPS_HPP
#define DELTOID_VECTOR_OPS_HPP

#include <cmath>
#include <cstddef>
#include <span>

namespace deltoid::vec {

inline double dot(std::span<const double> x, std::span<const double> y)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i] * y[i];
    }
    return sum;
}

inline double norm2(std::span<const double> x)
{
    return std::sqrt(dot(x, x));
}

// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += alpha * x[i];
    }
}

inline void scale(double alpha, std::span<double> x)
{
    for (double& v : x) {
        v *= alpha;
    }
}

// ||y - alpha x||_2
inline double residual_norm(std::span<const double> y, double alpha, std::span<const double> x)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - alpha * x[i];
        sum += r * r;
    }
    return std::sqrt(sum);
}

} // namespace deltoid::vec

#endif
