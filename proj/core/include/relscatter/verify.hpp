#pragma once

#include "relscatter/solver.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace relscatter {

// Periodic cube [-L, L)^3 with N points per axis; wave numbers pi m / L.
class PeriodicBox {
public:
    PeriodicBox(double L, std::size_t N);
    ~PeriodicBox();
    PeriodicBox(const PeriodicBox&) = delete;
    PeriodicBox& operator=(const PeriodicBox&) = delete;

    double L() const { return L_; }
    std::size_t N() const { return N_; }
    std::size_t size() const { return N_ * N_ * N_; }
    double spacing() const { return 2.0 * L_ / N_; }
    Vec3 point(std::size_t idx) const;
    // Wave number of lattice index m (0 <= m < N), in [-pi N / 2L, pi N / 2L).
    double wavenumber(std::size_t m) const;
    // Nearest wave vector on the dual lattice.
    Vec3 snap(const Vec3& k) const;
    bool on_lattice(const Vec3& k, double tol = 1e-12) const;

    // u -> F^-1 [m(|xi|) F u].
    std::vector<cplx> multiplier_apply(const std::vector<cplx>& u, const std::function<double(double)>& m) const;

private:
    double L_;
    std::size_t N_;
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

std::vector<cplx> sqrt_laplacian_apply(const PeriodicBox& box, const std::vector<cplx>& u);
std::vector<cplx> laplacian_apply(const PeriodicBox& box, const std::vector<cplx>& u);  // multiplier |xi|^2

// Radial raised-cosine window: 1 for |x| <= inner, 0 for |x| >= outer.
struct Window {
    double inner = 0.5;  // as fractions of L
    double outer = 0.8;
    double operator()(double r, double L) const;
};

// sup over |x| <= 0.4 L of |(sqrt(-Delta) + V - |k|)(w psi) + w V phi0|.
double eigen_residual(const ScatteredSolution& sol, const Potential& V, const PeriodicBox& box,
                      const Window& window = {});

// Field with radial symmetry, given as r -> (u(r), u'(r)).
using RadialField = std::function<std::pair<cplx, cplx>(double)>;

struct AnnulusNorms {
    std::vector<double> radii;     // annulus edges, increasing
    std::vector<double> condition; // int |u' -+ i lambda u|^2 <x>^{2(s-1)} dx per annulus
    std::vector<double> field;     // int |u|^2 <x>^{2(s-1)} dx per annulus

    std::vector<double> midpoints() const;  // geometric mid radius of each annulus
    std::vector<double> cumulative_condition() const;
    std::vector<double> cumulative_field() const;
};

// For a radial field, sum_j |(d_j -+ i lambda w_j) u|^2 = |u' -+ i lambda u|^2.
AnnulusNorms radiation_functional(const RadialField& u, double lambda, Sign sign, double s,
                                  const std::vector<double>& radii);

// Decay gain of the condition integrand over the field integrand, from fits
// of the per-annulus values.
double radiation_gain(const AnnulusNorms& n);

// Smooth cutoff in |xi|^2: 1 on [a^2/2, 3b^2/2], 0 below a^2/4 and above 2b^2.
double symbol_cutoff(double xi_norm, double a, double b);

struct SymbolCheck {
    double identity_error = 0.0;        // max relative error of the split
    double inner_margin = 0.0;          // min of ||xi|^2 - z^2| - a^2/4 on supp(1 - gamma)
    double outer_margin = 0.0;          // min of ||xi|^2 - z^2| - |xi|^2/3 for |xi|^2 >= 3b^2/2
    std::size_t inner_count = 0, outer_count = 0;
    bool z_in_dab = false;
};

SymbolCheck symbol_identity_check(cplx z, const std::vector<double>& xi_norms, double a, double b);

}  // namespace relscatter
