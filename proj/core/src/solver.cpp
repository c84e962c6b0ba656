#include "relscatter/solver.hpp"

#include "relscatter/parallel.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace relscatter {

namespace {
const cplx I(0.0, 1.0);

std::vector<std::size_t> interior_nodes(const GridRef& g) {
    double half = 0.5 * grid_radius(g);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < grid_size(g); ++i)
        if (norm(grid_node(g, i)) <= half) out.push_back(i);
    return out;
}

// Ball integral of the kernel as a function of |x| on [0, R]. The Riesz part
// has a closed form; the rest is smooth up to the edge, so a Chebyshev
// interpolant replaces one adaptive quadrature per evaluation point.
class SelfTermTable {
public:
    SelfTermTable(const KernelSpec& ks, double R) : R_(R), riesz_{KernelPart::riesz, ks.lambda, ks.sign} {
        if (ks.part == KernelPart::riesz) return;
        constexpr std::size_t n = 48;
        t_.resize(n);
        v_.resize(n);
        for (std::size_t j = 0; j < n; ++j) t_[j] = std::cos(pi * (j + 0.5) / n);
        parallel_for(n, [&](std::size_t j) {
            double r = 0.5 * R * (1.0 + t_[j]);
            v_[j] = ks.ball_integral(r, R) - riesz_.ball_integral(r, R);
        });
    }
    cplx operator()(double r) const {
        cplx base = riesz_.ball_integral(r, R_);
        if (t_.empty()) return base;
        // Barycentric form on first-kind nodes.
        double x = 2.0 * r / R_ - 1.0;
        cplx num = 0.0;
        double den = 0.0;
        for (std::size_t j = 0; j < t_.size(); ++j) {
            double d = x - t_[j];
            double w = (j % 2 ? -1.0 : 1.0) * std::sin(pi * (j + 0.5) / t_.size());
            if (d == 0.0) return base + v_[j];
            num += w / d * v_[j];
            den += w / d;
        }
        return base + num / den;
    }

private:
    double R_;
    KernelSpec riesz_;
    std::vector<double> t_;
    std::vector<cplx> v_;
};

// Nystrom interpolation: phi(x) = (phi0(x) - S(x)) / (1 + v(x) c(x)) inside the
// ball, phi0(x) - S(x) outside (the potential is cut off at the ball).
std::function<cplx(const Vec3&)> grid_evaluator(const ScatteredSolution& base, const Potential& V,
                                                const KernelSpec& ks) {
    GridRef g = *base.grid;
    std::vector<cplx> q(base.phi.size());
    for (std::size_t j = 0; j < q.size(); ++j) q[j] = V(norm(grid_node(g, j))) * base.phi[j];
    auto psi = base.psi;
    Vec3 k = base.k;
    double R = grid_radius(g);
    auto self = std::make_shared<const SelfTermTable>(ks, R);
    return [g, q = std::move(q), psi = std::move(psi), k, R, V, ks, self](const Vec3& x) -> cplx {
        double r = norm(x);
        cplx p0 = std::exp(I * dot(k, x));
        try {
            auto [s, c] = kernel_sums_at(ks, g, x, q);
            if (r >= R) return -s;
            double v = V(r);
            cplx a = (*self)(r);
            cplx phi = (p0 - s) / (1.0 + v * (a - c));
            return phi - p0;
        } catch (const SingularityError&) {
            for (std::size_t j = 0; j < grid_size(g); ++j) {
                Vec3 y = grid_node(g, j);
                bool hit = std::holds_alternative<std::shared_ptr<const RadialGrid>>(g)
                               ? std::abs(norm(y) - r) == 0.0 && std::abs(y[2] - x[2]) <= 1e-15 * (1.0 + r)
                               : y == x;
                if (hit) return psi[j];
            }
            throw;
        }
    };
}

}  // namespace

double Potential::operator()(double r) const {
    if (profile == "zero") return 0.0;
    double b = coupling * C * std::pow(japanese(r), -sigma);
    if (profile == "oscillating") return b * std::cos(r);
    return b;
}

double Potential::bound(double r) const {
    if (profile == "zero") return 0.0;
    return std::abs(coupling) * C * std::pow(japanese(r), -sigma);
}

void Potential::admit(double R) const {
    if (!(sigma > 2.0)) {
        std::ostringstream os;
        os << "potential: sigma = " << sigma
           << " is not admissible; the Lippmann-Schwinger solvers require sigma > 2";
        throw ConfigError(os.str());
    }
    if (!(R > 0.0)) throw ConfigError("potential: domain radius must be positive");
    // Certify the decay bound on a geometric sample including r = 0.
    for (int i = -1; i < 400; ++i) {
        double r = i < 0 ? 0.0 : 1e-3 * std::pow(R / 1e-3, i / 399.0);
        double v = (*this)(r);
        if (!std::isfinite(v) || std::abs(v) > bound(r) * (1.0 + 1e-12))
            throw ConfigError("potential: decay bound |v(r)| <= C <r>^-sigma violated");
    }
}

Potential make_potential(const std::string& profile, double C, double sigma, double coupling) {
    if (profile != "japanese" && profile != "oscillating" && profile != "zero")
        throw ConfigError("potential: unknown profile '" + profile + "' (japanese, oscillating, zero)");
    if (!(C >= 0.0) || !std::isfinite(C)) throw ConfigError("potential: C must be finite and nonnegative");
    if (!std::isfinite(sigma) || !std::isfinite(coupling)) throw ConfigError("potential: non-finite parameter");
    return Potential{profile, C, sigma, coupling};
}

cplx ScatteredSolution::phi0(const Vec3& x) const { return std::exp(I * dot(k, x)); }

ScatteredSolution born_iterate(const Vec3& k, Sign sign, const Potential& V, std::shared_ptr<const BallGrid> grid,
                               const BornOptions& opt) {
    double lambda = norm(k);
    if (!(lambda > 0.0)) throw DomainError("born_iterate: |k| must be positive");
    if (!grid) throw ContractError("born_iterate: null grid");
    if (!(opt.tol > 0.0) || opt.max_iter < 1) throw ConfigError("born_iterate: tol > 0 and max_iter >= 1 required");
    if (!(opt.relaxation > 0.0 && opt.relaxation <= 1.0)) throw ConfigError("born_iterate: relaxation must be in (0,1]");
    V.admit(grid->R);

    const BallGrid& G = *grid;
    std::size_t n = G.size();
    KernelSpec ks{KernelPart::total, lambda, flip(sign)};
    BallOperator op(ks, grid);

    std::vector<cplx> phi0(n), v(n), phi(n);
    for (std::size_t i = 0; i < n; ++i) {
        phi0[i] = std::exp(I * dot(k, G.nodes[i]));
        v[i] = V(norm(G.nodes[i]));
        phi[i] = opt.zero_start ? 0.0 : phi0[i];
    }

    ScatteredSolution sol;
    sol.k = k;
    sol.lambda = lambda;
    sol.sign = sign;
    sol.grid = GridRef(grid);
    sol.mode = "born";
    sol.tol = opt.tol;

    std::vector<cplx> q(n), next(n);
    bool converged = false;
    for (int it = 1; it <= opt.max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) q[i] = v[i] * phi[i];
        std::vector<cplx> gq = op.apply(q);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = (1.0 - opt.relaxation) * phi[i] + opt.relaxation * (phi0[i] - gq[i]);
            diff = std::max(diff, std::abs(next[i] - phi[i]));
            scale = std::max(scale, std::abs(next[i]));
        }
        double update = scale > 0.0 ? diff / scale : diff;
        sol.history.push_back(update);
        phi.swap(next);
        sol.iterations = it;
        if (!std::isfinite(update) || (it > 3 && update > 1e3 * sol.history.front()))
            throw DivergenceError("born_iterate: iteration diverges (coupling too strong for a Born series)",
                                  sol.history);
        if (update < opt.tol) {
            converged = true;
            break;
        }
    }
    if (!converged) throw DivergenceError("born_iterate: no convergence within max_iter", sol.history);

    sol.phi = phi;
    sol.psi.resize(n);
    for (std::size_t i = 0; i < n; ++i) sol.psi[i] = phi[i] - phi0[i];

    for (std::size_t i = 0; i < n; ++i) q[i] = v[i] * phi[i];
    std::vector<cplx> gq = op.apply(q);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (norm(G.nodes[i]) <= 0.5 * G.R) res = std::max(res, std::abs(phi[i] - phi0[i] + gq[i]));
    sol.residual = res;
    sol.psi_at = grid_evaluator(sol, V, ks);
    return sol;
}

ScatteredSolution nystrom_solve_radial(double lambda, Sign sign, const Potential& V,
                                       std::shared_ptr<const RadialGrid> grid, double tol, int direction) {
    if (!(lambda > 0.0)) throw DomainError("nystrom_solve_radial: lambda must be positive");
    if (!grid) throw ContractError("nystrom_solve_radial: null grid");
    if (direction != 1 && direction != -1) throw ConfigError("nystrom_solve_radial: direction must be +1 or -1");
    if (!(tol > 0.0)) throw ConfigError("nystrom_solve_radial: tol must be positive");
    V.admit(grid->R);

    const RadialGrid& G = *grid;
    std::size_t n = G.size();
    KernelSpec ks{KernelPart::total, lambda, flip(sign)};
    Eigen::MatrixXcd A = assemble_radial_operator(ks, G);
    Eigen::VectorXcd phi0(n);
    Vec3 k{0.0, 0.0, direction * lambda};
    for (std::size_t j = 0; j < n; ++j) {
        double v = V(G.radius(j));
        A.col(j) *= v;
        phi0[j] = std::exp(I * dot(k, G.node(j)));
    }
    A.diagonal().array() += 1.0;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    double rc = lu.rcond();
    if (!(rc > 1e-12))
        throw NearSingularError("nystrom_solve_radial: system is near singular (possible embedded eigenvalue or "
                                "resonance at this energy)",
                                rc);
    Eigen::VectorXcd phi = lu.solve(phi0);
    Eigen::VectorXcd r = A * phi - phi0;

    ScatteredSolution sol;
    sol.k = k;
    sol.lambda = lambda;
    sol.sign = sign;
    sol.grid = GridRef(grid);
    sol.mode = "nystrom-radial";
    sol.tol = tol;
    sol.iterations = 1;
    sol.phi.resize(n);
    sol.psi.resize(n);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sol.phi[i] = phi[i];
        sol.psi[i] = phi[i] - phi0[i];
        if (G.radius(i) <= 0.5 * G.R) res = std::max(res, std::abs(r[i]));
    }
    sol.residual = res;
    if (!(res <= tol)) throw NumericalError("nystrom_solve_radial: residual above tolerance");
    sol.psi_at = grid_evaluator(sol, V, ks);
    return sol;
}

double ls_residual(const ScatteredSolution& sol, const Potential& V, const GridRef& grid) {
    if (!sol.grid || !same_grid(*sol.grid, grid)) throw ContractError("ls_residual: solution lives on another grid");
    if (sol.phi.size() != grid_size(grid)) throw ContractError("ls_residual: size mismatch");
    std::size_t n = grid_size(grid);
    std::vector<cplx> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = V(norm(grid_node(grid, i))) * sol.phi[i];
    std::vector<std::size_t> targets = interior_nodes(grid);
    GridFunction gq = apply_kernel({KernelPart::total, sol.lambda, flip(sol.sign)}, GridFunction(grid, q), &targets);
    double res = 0.0;
    for (std::size_t i : targets) res = std::max(res, std::abs(sol.phi[i] - sol.phi0(grid_node(grid, i)) + gq.values[i]));
    return res;
}

}  // namespace relscatter
