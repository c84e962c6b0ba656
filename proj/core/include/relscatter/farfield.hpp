#pragma once

#include "relscatter/solver.hpp"

#include <vector>

namespace relscatter {

struct DecayFit {
    double exponent = 0.0;  // p in value ~ r^-p
    double std_error = 0.0;
    double r_min = 0.0, r_max = 0.0;
    Vec3 ray{0.0, 0.0, 1.0};
    std::size_t samples = 0;
    bool saturated = false;  // all values zero: nothing to fit
};

// Geometric radii from r_min to r_max inclusive, consecutive ratio at most ratio.
std::vector<double> geometric_samples(double r_min = 10.0, double r_max = 100.0, double ratio = 1.2);

// Least-squares slope of log value against log radius. Needs >= 8 points,
// r_min >= 1, one decade of span and positive values.
DecayFit fit_decay_exponent(const std::vector<double>& radii, const std::vector<double>& values);

// Scattering amplitude -(lambda / 2 pi) int e^{+-i lambda omega_x . y} v phi dy
// for a solution computed at wave vector lambda * omega_k.
cplx scattering_amplitude(double lambda, const Vec3& omega_x, const Vec3& omega_k, const ScatteredSolution& sol,
                          const Potential& V);

// Fit of |phi(r w) - e^{i r w . k}| along a ray.
DecayFit planewave_diff_decay(const ScatteredSolution& sol, const Vec3& ray, const std::vector<double>& samples);

// Fit of |phi - (e^{ix.k} + f e^{-+i lambda |x|} / |x|)| along a ray.
DecayFit farfield_error_decay(const ScatteredSolution& sol, cplx f, const Vec3& ray,
                              const std::vector<double>& samples);

// Ray-wise far-field fit: g(r) = r psi(r w) e^{+-i lambda r} sampled on the
// window and fitted by a + b r^-q, where q is the decay of the relative
// far-field error ((sigma - 3) / 2 for 3 < sigma < 5, 1 beyond). The constant
// a is the fitted amplitude; raw is g at the last sample. A window in the outer
// part of the domain, e.g. [R/4, R/2], keeps the pre-asymptotic terms out.
struct AmplitudeFit {
    cplx amplitude;
    cplx raw;
    double r_max = 0.0;
    double correction_exponent = 0.0;
};
AmplitudeFit farfield_amplitude_fit(const ScatteredSolution& sol, const Vec3& ray, const std::vector<double>& samples,
                                    double correction_exponent);
double farfield_correction_exponent(double sigma);

// The far-field difference split into pieces for u(y) = <y>^-sigma at |x| = X:
// outer_plane   int_{|y| >= sqrt X} e^{ia(X - w.y)} u dy
// outer_wave    int_{|y| >= sqrt X} e^{ia|x-y|} / |x-y| u dy
// inner_phase   (1/X) int_{|y| <= sqrt X} (e^{ia(X - w.y)} - e^{ia|x-y|}) u dy
// inner_amp     int_{|y| <= sqrt X} (1/X - 1/|x-y|) e^{ia|x-y|} u dy
struct FarFieldSplit {
    cplx outer_plane, outer_wave, inner_phase, inner_amp;
};
FarFieldSplit farfield_split(double a, double sigma, double X);

// Exponents the split pieces are bounded by (log factors at the borderline sigma).
struct SplitExponents {
    double outer_plane, outer_wave, inner_phase, inner_amp;
};
SplitExponents farfield_split_exponents(double sigma);

}  // namespace relscatter
