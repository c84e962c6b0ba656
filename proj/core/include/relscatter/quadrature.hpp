#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cstddef>
#include <vector>

namespace relscatter {

struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

// Gauss-Legendre on [-1, 1], nodes ascending.
const QuadRule& gauss_legendre(std::size_t n);
// Gauss-Legendre mapped to [a, b].
QuadRule gauss_legendre(std::size_t n, double a, double b);
// Gauss-Laguerre for weight e^{-t} on [0, inf).
const QuadRule& gauss_laguerre(std::size_t n);

// Legendre polynomial P_n(x) and its derivative.
void legendre_pd(std::size_t n, double x, double& p, double& dp);

// Adaptive 61-point Gauss-Kronrod; works for real or complex integrands.
template <class F>
auto integrate(F f, double a, double b, double tol = 1e-13, unsigned depth = 15) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    return gauss_kronrod<double, 61>::integrate(f, a, b, depth, tol, &err);
}

}  // namespace relscatter
