#pragma once

#include "relscatter/common.hpp"

namespace relscatter {

// Spectral parameter: an interior point z off [0, inf), or a boundary value
// lambda +- i0.
class ComplexEnergy {
public:
    static ComplexEnergy interior(cplx z);
    static ComplexEnergy boundary(double lambda, Sign sign);

    bool is_boundary() const { return boundary_; }
    cplx z() const { return z_; }
    double lambda() const { return z_.real(); }
    Sign sign() const { return sign_; }

private:
    ComplexEnergy() = default;
    cplx z_{};
    Sign sign_ = Sign::plus;
    bool boundary_ = false;
};

struct KernelValue {
    double riesz = 0.0;       // 1/(2 pi^2 r^2)
    cplx wave{0.0, 0.0};      // (lambda/2pi) e^{+-i lambda r}/r, or l_z for interior energies
    double correction = 0.0;  // m_lambda(r); zero for interior energies
    cplx total{0.0, 0.0};
};

// t / (pi^2 (t^2 + r^2)^2)
double poisson_kernel(double t, double r);

// l_z(r) = z/(2 pi^2 r) [sin(zr) ci(-zr) - cos(zr) si(-zr)]
cplx ell_z(const ComplexEnergy& e, double r);
// 1/(2 pi^2 r^2) + l_z(r)
cplx g_z(const ComplexEnergy& e, double r);
KernelValue kernel_value(const ComplexEnergy& e, double r);

// m_lambda(r) = -(lambda / (2 pi^2 r)) f(lambda r)
double m_lambda(double lambda, double r);
// Same value through the tabulated auxiliary function.
double m_lambda_fast(double lambda, double r);
// d/dr m_lambda
double m_lambda_deriv(double lambda, double r);

KernelValue g_boundary(double lambda, Sign sign, double r);
// Total of g_boundary using the tabulated correction.
cplx g_boundary_fast(double lambda, Sign sign, double r);
// d/dr of the total boundary kernel.
cplx g_boundary_deriv(double lambda, Sign sign, double r);

// int_0^inf e^{tz} P_t(a) dt by adaptive quadrature, Re z < 0.
cplx laplace_oracle(cplx z, double a);

}  // namespace relscatter
