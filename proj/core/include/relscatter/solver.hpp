#pragma once

#include "relscatter/operators.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace relscatter {

class PartialWaveField;

// Radial potential v(r) = coupling * C * shape(r) with |v(r)| <= |coupling| C <r>^-sigma.
// Shapes: "japanese" <r>^-sigma, "oscillating" <r>^-sigma cos r, "zero".
struct Potential {
    std::string profile = "japanese";
    double C = 0.05;
    double sigma = 4.0;
    double coupling = 1.0;

    double operator()(double r) const;
    double bound(double r) const;
    // Throws ConfigError unless sigma > 2 and the bound holds on samples up to R.
    void admit(double R) const;
};

Potential make_potential(const std::string& profile, double C, double sigma, double coupling = 1.0);

struct ScatteredSolution {
    Vec3 k{0.0, 0.0, 1.0};
    double lambda = 1.0;
    Sign sign = Sign::plus;  // eigenfunction sign; the kernel used is the opposite one
    std::optional<GridRef> grid;
    std::vector<cplx> phi, psi;  // on grid nodes when a grid is present
    double residual = 0.0;
    std::string mode;
    int iterations = 0;
    double tol = 0.0;
    std::vector<double> history;
    // Scattered wave psi = phi - phi0 at an arbitrary point.
    std::function<cplx(const Vec3&)> psi_at;
    std::shared_ptr<const PartialWaveField> waves;

    cplx phi0(const Vec3& x) const;
    cplx phi_at(const Vec3& x) const { return phi0(x) + psi_at(x); }
};

struct DivergenceError : NumericalError {
    std::vector<double> history;
    DivergenceError(const std::string& what, std::vector<double> h) : NumericalError(what), history(std::move(h)) {}
};

struct NearSingularError : NumericalError {
    double rcond;
    NearSingularError(const std::string& what, double rc) : NumericalError(what), rcond(rc) {}
};

struct BornOptions {
    double tol = 1e-8;
    int max_iter = 200;
    double relaxation = 1.0;
    bool zero_start = false;  // start from 0 instead of phi0
};

// phi_{n+1} = phi0 - G(V phi_n) with G the boundary kernel of the opposite sign.
ScatteredSolution born_iterate(const Vec3& k, Sign sign, const Potential& V, std::shared_ptr<const BallGrid> grid,
                               const BornOptions& opt = {});

// Dense solve on the azimuthally reduced grid. k points along direction * z.
ScatteredSolution nystrom_solve_radial(double lambda, Sign sign, const Potential& V,
                                       std::shared_ptr<const RadialGrid> grid, double tol = 1e-8,
                                       int direction = 1);

// sup over |x| <= R_dom/2 of |phi - phi0 + G(V phi)| with the grid discretization.
double ls_residual(const ScatteredSolution& sol, const Potential& V, const GridRef& grid);

}  // namespace relscatter
