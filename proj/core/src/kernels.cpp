#include "relscatter/kernels.hpp"

#include "relscatter/quadrature.hpp"
#include "relscatter/specfun.hpp"

#include <cmath>
#include <limits>

namespace relscatter {

ComplexEnergy ComplexEnergy::interior(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("ComplexEnergy: non-finite z");
    if (z.imag() == 0.0 && z.real() >= 0.0)
        throw DomainError("ComplexEnergy: interior z must lie off [0, inf)");
    ComplexEnergy e;
    e.z_ = z;
    return e;
}

ComplexEnergy ComplexEnergy::boundary(double lambda, Sign sign) {
    if (!(lambda > 0.0)) throw DomainError("ComplexEnergy: boundary lambda must be positive");
    ComplexEnergy e;
    e.z_ = cplx(lambda, 0.0);
    e.sign_ = sign;
    e.boundary_ = true;
    return e;
}

double poisson_kernel(double t, double r) {
    if (!(t > 0.0)) throw DomainError("poisson_kernel: t must be positive");
    if (r < 0.0) throw DomainError("poisson_kernel: r must be nonnegative");
    double s = t * t + r * r;
    return t / (pi * pi * s * s);
}

namespace {

const cplx I(0.0, 1.0);

// e^w E1(w); when w sits on the negative real axis, lower selects the value
// from below the cut.
cplx e1s(cplx w, bool lower) {
    if (lower && w.imag() == 0.0 && w.real() < 0.0) return std::conj(expint_e1_scaled(std::conj(w)));
    return expint_e1_scaled(w);
}

// F(p) = -(sin p ci(p) + cos p si(p)), so that l_z(r) = z/(2 pi^2 r) F(-z r).
cplx bracket(cplx p) {
    if (std::abs(p) <= 2.0) return -(std::sin(p) * ci_series(p) + std::cos(p) * si_series(p));
    if (p.real() >= 0.0) {
        bool lower = p.imag() < 0.0;
        return 0.5 * I * (e1s(I * p, false) - e1s(-I * p, lower));
    }
    double s = p.imag() > 0.0 ? 1.0 : -1.0;
    return -bracket(-p) + pi * std::exp(I * s * p);
}

void check_r(double r) {
    if (r == 0.0) throw SingularityError("kernel evaluated at r = 0");
    if (!(r > 0.0)) throw DomainError("kernel radius must be positive");
}

}  // namespace

cplx ell_z(const ComplexEnergy& e, double r) {
    check_r(r);
    if (e.is_boundary()) throw DomainError("ell_z: interior energy required");
    cplx z = e.z();
    return z / (2.0 * pi * pi * r) * bracket(-z * r);
}

cplx g_z(const ComplexEnergy& e, double r) {
    check_r(r);
    if (e.is_boundary()) return g_boundary(e.lambda(), e.sign(), r).total;
    return 1.0 / (2.0 * pi * pi * r * r) + ell_z(e, r);
}

KernelValue kernel_value(const ComplexEnergy& e, double r) {
    if (e.is_boundary()) return g_boundary(e.lambda(), e.sign(), r);
    KernelValue k;
    k.riesz = 1.0 / (2.0 * pi * pi * r * r);
    k.wave = ell_z(e, r);
    k.total = k.riesz + k.wave;
    return k;
}

double m_lambda(double lambda, double r) {
    if (!(lambda > 0.0)) throw DomainError("m_lambda: lambda must be positive");
    check_r(r);
    return -lambda / (2.0 * pi * pi * r) * aux_f(lambda * r);
}

double m_lambda_fast(double lambda, double r) {
    return -lambda / (2.0 * pi * pi * r) * aux_f_fast(lambda * r);
}

double m_lambda_deriv(double lambda, double r) {
    double f, g;
    aux_fg_fast(lambda * r, f, g);
    return lambda / (2.0 * pi * pi * r * r) * f + lambda * lambda / (2.0 * pi * pi * r) * g;
}

KernelValue g_boundary(double lambda, Sign sign, double r) {
    if (!(lambda > 0.0)) throw DomainError("g_boundary: lambda must be positive");
    check_r(r);
    KernelValue k;
    k.riesz = 1.0 / (2.0 * pi * pi * r * r);
    k.wave = lambda / (2.0 * pi) * std::exp(I * (sgn(sign) * lambda * r)) / r;
    k.correction = m_lambda(lambda, r);
    k.total = k.riesz + k.wave + k.correction;
    return k;
}

cplx g_boundary_fast(double lambda, Sign sign, double r) {
    double riesz = 1.0 / (2.0 * pi * pi * r * r);
    cplx wave = lambda / (2.0 * pi) * std::exp(I * (sgn(sign) * lambda * r)) / r;
    return riesz + wave + m_lambda_fast(lambda, r);
}

cplx g_boundary_deriv(double lambda, Sign sign, double r) {
    double s = sgn(sign);
    cplx e = std::exp(I * (s * lambda * r));
    cplx wave_d = lambda / (2.0 * pi) * e * (I * s * lambda / r - 1.0 / (r * r));
    return -1.0 / (pi * pi * r * r * r) + wave_d + m_lambda_deriv(lambda, r);
}

cplx laplace_oracle(cplx z, double a) {
    if (!(z.real() < 0.0)) throw DomainError("laplace_oracle: requires Re z < 0");
    if (!(a > 0.0)) throw DomainError("laplace_oracle: a must be positive");
    auto integrand = [&](double t) {
        double s = t * t + a * a;
        return std::exp(t * z) * (t / (pi * pi * s * s));
    };
    // Peak region [0, a], then a finite stretch where the exponential decays
    // by e^{-40}, then a Gauss-Laguerre tail that is negligible but kept.
    double decay = -z.real();
    double T = a + 40.0 / decay;
    cplx head = integrate(integrand, 0.0, a, 1e-13);
    cplx mid = 0.0;
    double left = a, width = std::max(a, 1.0 / decay);
    while (left < T) {
        double right = std::min(T, left + width);
        mid += integrate(integrand, left, right, 1e-13);
        left = right;
        width *= 2.0;
    }
    const QuadRule& q = gauss_laguerre(48);
    cplx tail = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        double t = T + q.x[i] / decay;
        tail += q.w[i] * integrand(t) * std::exp(q.x[i]);
    }
    tail /= decay;
    return head + mid + tail;
}

}  // namespace relscatter
