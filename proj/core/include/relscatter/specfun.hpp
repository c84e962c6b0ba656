#pragma once

#include "relscatter/common.hpp"

namespace relscatter {

// Sine and cosine integrals in the sign convention
//   ci(rho) = int_rho^inf cos t / t dt,   si(rho) = -int_rho^inf sin t / t dt,
// continued to the complex plane as
//   ci(z) = -gamma - Log z - h_e(z),      si(z) = -pi/2 + sum_m (-1)^m z^(2m+1) / ((2m+1)! (2m+1)).
double ci_real(double rho);
double si_real(double rho);
cplx ci_complex(cplx z);
cplx si_complex(cplx z);

// Entire even part h_e(z) = sum_{m>=1} (-1)^m z^(2m) / ((2m)! 2m).
cplx h_e(cplx z);

// f(rho) = int_0^inf e^{-rho t} / (1 + t^2) dt = -(sin rho ci(rho) + cos rho si(rho)).
double aux_f(double rho);
// g(rho) = int_0^inf t e^{-rho t} / (1 + t^2) dt = cos rho ci(rho) - sin rho si(rho).
double aux_g(double rho);

// e^w E1(w) on the principal branch, |arg w| < pi. Points on the negative real
// axis are taken from the upper side.
cplx expint_e1_scaled(cplx w);

// Plain power-series evaluations, exposed so the crossover to the
// exponential-integral route can be tested.
cplx ci_series(cplx z);
cplx si_series(cplx z);

}  // namespace relscatter

namespace relscatter {

// Tabulated f and g (quintic Hermite on [2, 40], series below, asymptotic
// expansion above). Agrees with aux_f / aux_g to about 1e-13 and is meant
// for the inner loops of the solvers.
void aux_fg_fast(double rho, double& f, double& g);
inline double aux_f_fast(double rho) {
    double f, g;
    aux_fg_fast(rho, f, g);
    return f;
}

}  // namespace relscatter

namespace relscatter {

// Spherical Bessel functions j_l(x), l = 0..L, by normalized backward
// recurrence; y_l(x) by upward recurrence (overflows to inf for l >> x).
void sph_bessel_j(std::size_t L, double x, double* out);
void sph_bessel_y(std::size_t L, double x, double* out);

// Legendre functions of the second kind Q_l(1 + x), l = 0..L, for x > 0.
// Taking x rather than z avoids the cancellation in z - 1 near the cut.
void legendre_q(std::size_t L, double x, double* out);

}  // namespace relscatter
