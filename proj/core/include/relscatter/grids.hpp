#pragma once

#include "relscatter/common.hpp"
#include "relscatter/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

namespace relscatter {

using Vec3 = std::array<double, 3>;

inline double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Full 3-D product rule on the ball |x| <= R: Gauss-Legendre in r, in
// cos(theta) and a uniform azimuth. Node index is
// (i_r * n_mu + i_mu) * n_phi + i_phi, so each (i_r, i_mu) pair is a ring.
struct BallGrid {
    double R = 0.0;
    std::size_t n_r = 0, n_mu = 0, n_phi = 0;
    std::vector<double> r, w_r;    // radial rule (weights without r^2)
    std::vector<double> mu, w_mu;  // polar rule
    std::vector<Vec3> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    std::size_t rings() const { return n_r * n_mu; }
    std::size_t index(std::size_t ir, std::size_t imu, std::size_t iphi) const {
        return (ir * n_mu + imu) * n_phi + iphi;
    }
};

// Azimuthally reduced grid for fields symmetric about the z axis. Node index
// is i_r * n_mu + i_mu; weights include 2 pi r^2.
struct RadialGrid {
    double R = 0.0;
    std::size_t n_r = 0, n_mu = 0, n_phi = 32;
    std::vector<double> r, w_r;
    std::vector<double> mu, w_mu;
    std::vector<double> weights;

    std::size_t size() const { return n_r * n_mu; }
    std::size_t index(std::size_t ir, std::size_t imu) const { return ir * n_mu + imu; }
    double radius(std::size_t i) const { return r[i / n_mu]; }
    double cosine(std::size_t i) const { return mu[i % n_mu]; }
    // Representative point in the x-z half plane.
    Vec3 node(std::size_t i) const {
        double m = cosine(i), rr = radius(i);
        return {rr * std::sqrt(std::max(0.0, 1.0 - m * m)), 0.0, rr * m};
    }
};

// n_ang polar nodes and 2 n_ang azimuthal nodes unless n_phi is given.
BallGrid build_ball_grid(double R, std::size_t n_r, std::size_t n_ang, std::size_t n_phi = 0);
RadialGrid build_radial_grid(double R, std::size_t n_r, std::size_t n_mu, std::size_t n_phi = 32);

using RadialKernel = std::function<cplx(double)>;

// Squared distance between (r, mu, phi = 0) and (rp, mup, phi).
inline double ring_distance2(double r, double mu, double rp, double mup, double cphi) {
    double s = std::sqrt(std::max(0.0, 1.0 - mu * mu)), sp = std::sqrt(std::max(0.0, 1.0 - mup * mup));
    double d2 = r * r + rp * rp - 2.0 * r * rp * (mu * mup + s * sp * cphi);
    return std::max(d2, 0.0);
}

// int_0^{2 pi} kernel(|x - y|) dphi, where x = (r, mu) and y = (rp, mup, phi).
// Trapezoid with n_phi points, doubled until it settles to rel_tol.
template <class K>
cplx azimuthal_reduce_t(const K& kernel, double r, double mu, double rp, double mup, std::size_t n_phi,
                        double rel_tol = 1e-13) {
    if (!(r > 0.0) || !(rp > 0.0)) throw DomainError("azimuthal_reduce: radii must be positive");
    if (std::abs(mu) > 1.0 || std::abs(mup) > 1.0) throw DomainError("azimuthal_reduce: cosines outside [-1,1]");
    if (n_phi < 2) throw ConfigError("azimuthal_reduce: n_phi must be at least 2");
    if (r == rp && mu == mup) throw SingularityError("azimuthal_reduce: coincident nodes");
    auto f = [&](double phi) { return cplx(kernel(std::sqrt(ring_distance2(r, mu, rp, mup, std::cos(phi))))); };
    std::size_t n = n_phi;
    double h = 2.0 * pi / n;
    if (n % 2 == 1) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += f(j * h);
        return h * s;
    }
    // Symmetric in phi, so sample [0, pi] with trapezoid end weights.
    cplx sum = 0.5 * (f(0.0) + f(pi));
    for (std::size_t j = 1; j < n / 2; ++j) sum += f(j * h);
    cplx est = 2.0 * h * sum;
    for (int level = 0; level < 16; ++level) {
        // New midpoints on [0, pi].
        cplx add = 0.0;
        for (std::size_t j = 0; j < n / 2; ++j) add += f((j + 0.5) * h);
        sum += add;
        n *= 2;
        h *= 0.5;
        cplx next = 2.0 * h * sum;
        if (std::abs(next - est) <= rel_tol * std::abs(next)) return next;
        est = next;
    }
    // Still unsettled: the pair is nearly coincident. Finish adaptively.
    double gap = std::sqrt(ring_distance2(r, mu, rp, mup, 1.0));
    double scale = std::max(gap / std::max(r, rp), 1e-12);
    double cut = std::min(pi, 10.0 * scale);
    auto fc = [&](double phi) { return f(phi); };
    return 2.0 * (integrate(fc, 0.0, cut, rel_tol) + (cut < pi ? integrate(fc, cut, pi, rel_tol) : cplx(0.0)));
}

cplx azimuthal_reduce(const RadialKernel& kernel, double r, double mu, double rp, double mup,
                      std::size_t n_phi = 32);

// Self-cell geometries for diagonal_correction.
struct SphereCell {
    double radius;
};
struct BoxCell {
    double hx, hy, hz;  // full side lengths
};
using CellGeometry = std::variant<SphereCell, BoxCell>;

// int_cell |y|^{-order} dy over a cell centred at the node.
double diagonal_correction(const CellGeometry& cell, int singularity_order);

// int_{|y| <= R} k(|x - y|) dy for a radial kernel, as a 1-D integral over the
// distance d with the area of the sphere of radius d about x that lies in the ball.
template <class K>
cplx ball_kernel_integral(const K& kernel, double x_norm, double R, double rel_tol = 1e-11) {
    auto area = [&](double d) {
        if (d <= R - x_norm) return 4.0 * pi * d * d;
        double c = (R * R - x_norm * x_norm - d * d) / (2.0 * x_norm * d);
        c = std::clamp(c, -1.0, 1.0);
        return 2.0 * pi * d * d * (1.0 + c);
    };
    auto f = [&](double d) { return d > 0.0 ? cplx(kernel(d)) * area(d) : cplx(0.0); };
    double knee = R - x_norm, end = R + x_norm;
    cplx total = 0.0;
    // Break at the knee, and chop long ranges so oscillatory kernels stay resolved.
    std::vector<double> cuts{0.0};
    if (knee > 0.0 && knee < end) cuts.push_back(knee);
    cuts.push_back(end);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        double a = cuts[s], b = cuts[s + 1];
        std::size_t pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / 4.0)));
        for (std::size_t p = 0; p < pieces; ++p) {
            double lo = a + (b - a) * p / pieces, hi = a + (b - a) * (p + 1) / pieces;
            total += integrate(f, lo, hi, rel_tol);
        }
    }
    return total;
}

}  // namespace relscatter
