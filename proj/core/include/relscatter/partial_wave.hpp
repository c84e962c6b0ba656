#pragma once

#include "relscatter/solver.hpp"

#include <memory>
#include <vector>

namespace relscatter {

// Solver for radial potentials on large balls. The solution is expanded as
//   phi = sum_l (2l+1) i^l u_l(r) P_l(cos angle(x, k))
// and each u_l solves a 1-D Fredholm equation on composite Gauss-Legendre
// panels, with product integration for the log and kink singularities of the
// projected kernel on the panels next to the target.
struct PartialWaveOptions {
    double R = 200.0;
    std::size_t order = 20;     // nodes per panel
    double panel_length = 0.0;  // 0 picks min(12, two wavelengths)
    std::size_t fine = 40;      // nodes per graded piece in product integration
};

class PartialWaveField {
public:
    double lambda = 1.0;
    Sign sign = Sign::plus;
    Vec3 khat{0.0, 0.0, 1.0};
    double R = 0.0;
    std::size_t l_max = 0;
    std::vector<double> edges;               // panel boundaries
    std::vector<double> r, w;                // radial nodes and weights
    std::vector<std::size_t> first;          // first active node per l
    std::vector<std::vector<cplx>> waves;    // psi_l = u_l - j_l on nodes first[l]..
    std::vector<cplx> moments;               // int r^2 j_l(lambda r) v u_l dr
    double residual = 0.0;
    Potential V;
    std::size_t order = 0;
    std::vector<double> xref, bw;  // reference panel nodes, barycentric weights
    std::vector<double> jnode;     // j_l(lambda r_i) row-major with stride l_max + 1
    std::vector<double> vnode;     // potential at the nodes

    // psi_l(rho); inside the ball by panel interpolation, outside by quadrature.
    cplx radial(std::size_t l, double rho) const;
    std::vector<cplx> radial_all(double rho, std::size_t L) const;
    cplx psi(const Vec3& x) const;
    // Scattering amplitude for cos angle(omega_x, omega_k) = c.
    cplx amplitude(double c) const;
    std::size_t l_cut(double rho) const;
};

// Highest partial wave kept at radius rho.
std::size_t partial_wave_cutoff(double lambda, double rho);

std::shared_ptr<const PartialWaveField> partial_wave_field(const Vec3& k, Sign sign, const Potential& V,
                                                           const PartialWaveOptions& opt = {});

// Wraps partial_wave_field as a ScatteredSolution (mode "partial-wave", no grid).
ScatteredSolution partial_wave_solve(const Vec3& k, Sign sign, const Potential& V,
                                     const PartialWaveOptions& opt = {});

}  // namespace relscatter
