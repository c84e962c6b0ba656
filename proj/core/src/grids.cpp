#include "relscatter/grids.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

namespace relscatter {

BallGrid build_ball_grid(double R, std::size_t n_r, std::size_t n_ang, std::size_t n_phi) {
    if (!(R > 0.0)) throw ConfigError("build_ball_grid: R_dom must be positive");
    if (n_r < 4 || n_ang < 4) throw ConfigError("build_ball_grid: N_r and N_ang must be at least 4");
    if (n_phi == 0) n_phi = 2 * n_ang;
    if (n_phi < 4) throw ConfigError("build_ball_grid: N_phi must be at least 4");
    BallGrid g;
    g.R = R;
    g.n_r = n_r;
    g.n_mu = n_ang;
    g.n_phi = n_phi;
    QuadRule qr = gauss_legendre(n_r, 0.0, R);
    const QuadRule& qm = gauss_legendre(n_ang);
    g.r = qr.x;
    g.w_r = qr.w;
    g.mu = qm.x;
    g.w_mu = qm.w;
    g.nodes.reserve(n_r * n_ang * n_phi);
    g.weights.reserve(n_r * n_ang * n_phi);
    double hphi = 2.0 * pi / n_phi;
    for (std::size_t i = 0; i < n_r; ++i) {
        for (std::size_t j = 0; j < n_ang; ++j) {
            double s = std::sqrt(1.0 - qm.x[j] * qm.x[j]);
            for (std::size_t k = 0; k < n_phi; ++k) {
                double phi = k * hphi;
                g.nodes.push_back({qr.x[i] * s * std::cos(phi), qr.x[i] * s * std::sin(phi), qr.x[i] * qm.x[j]});
                g.weights.push_back(qr.w[i] * qr.x[i] * qr.x[i] * qm.w[j] * hphi);
            }
        }
    }
    return g;
}

RadialGrid build_radial_grid(double R, std::size_t n_r, std::size_t n_mu, std::size_t n_phi) {
    if (!(R > 0.0)) throw ConfigError("build_radial_grid: R_dom must be positive");
    if (n_r < 4 || n_mu < 4) throw ConfigError("build_radial_grid: N_r and N_ang must be at least 4");
    if (n_phi < 4) throw ConfigError("build_radial_grid: N_phi must be at least 4");
    RadialGrid g;
    g.R = R;
    g.n_r = n_r;
    g.n_mu = n_mu;
    g.n_phi = n_phi;
    QuadRule qr = gauss_legendre(n_r, 0.0, R);
    const QuadRule& qm = gauss_legendre(n_mu);
    g.r = qr.x;
    g.w_r = qr.w;
    g.mu = qm.x;
    g.w_mu = qm.w;
    g.weights.resize(n_r * n_mu);
    for (std::size_t i = 0; i < n_r; ++i)
        for (std::size_t j = 0; j < n_mu; ++j)
            g.weights[g.index(i, j)] = 2.0 * pi * qr.x[i] * qr.x[i] * qr.w[i] * qm.w[j];
    return g;
}

cplx azimuthal_reduce(const RadialKernel& kernel, double r, double mu, double rp, double mup, std::size_t n_phi) {
    return azimuthal_reduce_t(kernel, r, mu, rp, mup, n_phi);
}

namespace {

// Distance from the centre of a box to its surface along a unit direction.
double box_reach(const BoxCell& b, double ox, double oy, double oz) {
    double t = std::numeric_limits<double>::infinity();
    if (ox != 0.0) t = std::min(t, 0.5 * b.hx / std::abs(ox));
    if (oy != 0.0) t = std::min(t, 0.5 * b.hy / std::abs(oy));
    if (oz != 0.0) t = std::min(t, 0.5 * b.hz / std::abs(oz));
    return t;
}

}  // namespace

double diagonal_correction(const CellGeometry& cell, int order) {
    if (order >= 3) throw DomainError("diagonal_correction: |y|^-order is not integrable for order >= 3");
    if (order < 1) throw DomainError("diagonal_correction: order must be 1 or 2");
    double p = 3.0 - order;
    if (const auto* s = std::get_if<SphereCell>(&cell)) {
        if (!(s->radius > 0.0)) throw DomainError("diagonal_correction: cell radius must be positive");
        return 4.0 * pi * std::pow(s->radius, p) / p;
    }
    const BoxCell& b = std::get<BoxCell>(cell);
    if (!(b.hx > 0.0 && b.hy > 0.0 && b.hz > 0.0)) throw DomainError("diagonal_correction: box sides must be positive");
    // Polar integration: int_{S^2} reach(omega)^p / p domega, over one octant times 8.
    using boost::math::quadrature::gauss_kronrod;
    auto inner = [&](double ct) {
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        auto f = [&](double phi) {
            double t = box_reach(b, st * std::cos(phi), st * std::sin(phi), ct);
            return std::pow(t, p) / p;
        };
        // Kink where the x and y faces trade places.
        double knee = std::atan2(b.hy, b.hx);
        return gauss_kronrod<double, 31>::integrate(f, 0.0, knee, 12, 1e-12) +
               gauss_kronrod<double, 31>::integrate(f, knee, pi / 2, 12, 1e-12);
    };
    return 8.0 * gauss_kronrod<double, 31>::integrate(inner, 0.0, 1.0, 12, 1e-11);
}

}  // namespace relscatter
