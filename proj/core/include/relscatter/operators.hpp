#pragma once

#include "relscatter/grids.hpp"

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace relscatter {

using GridRef = std::variant<std::shared_ptr<const BallGrid>, std::shared_ptr<const RadialGrid>>;

std::size_t grid_size(const GridRef& g);
Vec3 grid_node(const GridRef& g, std::size_t i);
double grid_weight(const GridRef& g, std::size_t i);
double grid_radius(const GridRef& g);
bool same_grid(const GridRef& a, const GridRef& b);

// Complex samples on the nodes of a grid. On a RadialGrid the function is
// understood to be symmetric about the z axis.
struct GridFunction {
    GridRef grid;
    std::vector<cplx> values;

    GridFunction(GridRef g, std::vector<cplx> v);
    template <class F>
    static GridFunction sample(GridRef g, F&& f) {
        std::vector<cplx> v(grid_size(g));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid_node(g, i));
        return GridFunction(std::move(g), std::move(v));
    }
    std::size_t size() const { return values.size(); }
};

// Which piece of the boundary kernel an operator uses.
enum class KernelPart { riesz, wave, correction, total };

struct KernelSpec {
    KernelPart part = KernelPart::total;
    double lambda = 1.0;
    Sign sign = Sign::plus;

    cplx operator()(double d) const;
    // Closed-form or 1-D value of int_{|y|<=R} k(|x-y|) dy.
    cplx ball_integral(double x_norm, double R) const;
};

// Nystrom application with the singular self-term replaced by the exact ball
// integral of the kernel minus the discrete row sum. If targets is given,
// only those node values are computed; the rest are zero.
GridFunction apply_kernel(const KernelSpec& k, const GridFunction& u,
                          const std::vector<std::size_t>* targets = nullptr);

GridFunction apply_G0(const GridFunction& u);
GridFunction apply_K(double lambda, Sign sign, const GridFunction& u);
GridFunction apply_M(double lambda, const GridFunction& u);
GridFunction apply_G_boundary(double lambda, Sign sign, const GridFunction& u);

// At a point x that is not a node: first = sum_j w_j k(x, y_j) q_j and
// second = sum_j w_j k(x, y_j). On a RadialGrid x is reduced to (|x|, x_3/|x|).
std::pair<cplx, cplx> kernel_sums_at(const KernelSpec& k, const GridRef& g, const Vec3& x, const std::vector<cplx>& q);

// Dense matrix of the reduced operator on a RadialGrid: (G u)_i = sum_j B_ij u_j.
Eigen::MatrixXcd assemble_radial_operator(const KernelSpec& k, const RadialGrid& g);

// Kernel blocks of the full 3-D operator on a BallGrid, kept for repeated
// application (Born sweeps). Memory is rings^2 * (n_phi/2 + 1) complex values.
class BallOperator {
public:
    BallOperator(const KernelSpec& k, std::shared_ptr<const BallGrid> g);
    std::vector<cplx> apply(const std::vector<cplx>& u) const;
    const BallGrid& grid() const { return *grid_; }

private:
    std::shared_ptr<const BallGrid> grid_;
    std::size_t half_ = 0;
    std::vector<cplx> blocks_;  // [target ring][source ring][0..half]
    std::vector<cplx> self_;    // per target ring
};

struct Envelope {
    enum class Regime { power, power_log, saturated };
    Regime regime = Regime::power;
    double exponent = 1.0;
    double constant = 1.0;

    double operator()(double r) const;
};

const char* to_string(Envelope::Regime r);

// Bound for int |x-y|^-beta <y>^-gamma dy in R^n.
Envelope envelope_for(double beta, double gamma, int n = 3);
// Bound for G0 applied to <y>^-ell.
Envelope envelope_G0(double ell);

// int_{|y| <= R} |x-y|^-beta <y>^-gamma dy in R^3 by adaptive quadrature,
// with R = infinity by default.
double phi_convolution(double beta, double gamma, const Vec3& x, int n = 3,
                       double R = std::numeric_limits<double>::infinity());

}  // namespace relscatter
