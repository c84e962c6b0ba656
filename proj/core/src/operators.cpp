#include "relscatter/operators.hpp"

#include "relscatter/kernels.hpp"
#include "relscatter/parallel.hpp"
#include "relscatter/specfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

namespace relscatter {

std::size_t grid_size(const GridRef& g) {
    return std::visit([](const auto& p) { return p->size(); }, g);
}

Vec3 grid_node(const GridRef& g, std::size_t i) {
    if (auto b = std::get_if<std::shared_ptr<const BallGrid>>(&g)) return (*b)->nodes[i];
    return std::get<std::shared_ptr<const RadialGrid>>(g)->node(i);
}

double grid_weight(const GridRef& g, std::size_t i) {
    return std::visit([i](const auto& p) { return p->weights[i]; }, g);
}

double grid_radius(const GridRef& g) {
    return std::visit([](const auto& p) { return p->R; }, g);
}

bool same_grid(const GridRef& a, const GridRef& b) {
    if (a.index() != b.index()) return false;
    return std::visit([&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        return p.get() == std::get<P>(b).get();
    }, a);
}

GridFunction::GridFunction(GridRef g, std::vector<cplx> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid_size(grid)) throw ContractError("GridFunction: value count does not match grid");
    for (const cplx& z : values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw ContractError("GridFunction: non-finite value");
}

namespace {
const cplx I(0.0, 1.0);
}

cplx KernelSpec::operator()(double d) const {
    switch (part) {
        case KernelPart::riesz:
            return 1.0 / (2.0 * pi * pi * d * d);
        case KernelPart::wave:
            return lambda / (2.0 * pi) * std::exp(I * (sgn(sign) * lambda * d)) / d;
        case KernelPart::correction:
            return m_lambda_fast(lambda, d);
        case KernelPart::total:
            return g_boundary_fast(lambda, sign, d);
    }
    return 0.0;
}

cplx KernelSpec::ball_integral(double x_norm, double R) const {
    if (part == KernelPart::riesz) {
        // Closed form of (1/2 pi^2) int_ball |x-y|^-2 dy.
        double a = x_norm;
        if (a == 0.0) return 2.0 * R / pi;
        if (a >= R) return R / pi;
        double v = R + (R * R - a * a) / (2.0 * a) * std::log((R + a) / (R - a));
        return v / pi;
    }
    return ball_kernel_integral(*this, x_norm, R);
}

namespace {

void check_lambda(double lambda) {
    if (!(lambda > 0.0)) throw DomainError("operator: lambda must be positive");
}

// Exact ball integrals, one per distinct radius.
std::vector<cplx> radial_self_terms(const KernelSpec& k, const std::vector<double>& r, double R) {
    std::vector<cplx> a(r.size());
    parallel_for(r.size(), [&](std::size_t i) { a[i] = k.ball_integral(r[i], R); });
    return a;
}

// Kernel values between target ring a and every source ring for azimuthal
// offsets 0..half, with the coincident entry zeroed.
void ring_block(const KernelSpec& k, const BallGrid& g, std::size_t a, std::vector<cplx>& out) {
    std::size_t half = g.n_phi / 2, nring = g.rings();
    out.assign(nring * (half + 1), 0.0);
    double h = 2.0 * pi / g.n_phi;
    std::size_t ia = a / g.n_mu, ja = a % g.n_mu;
    for (std::size_t b = 0; b < nring; ++b) {
        std::size_t ib = b / g.n_mu, jb = b % g.n_mu;
        for (std::size_t q = 0; q <= half; ++q) {
            if (b == a && q == 0) continue;
            double d = std::sqrt(ring_distance2(g.r[ia], g.mu[ja], g.r[ib], g.mu[jb], std::cos(q * h)));
            out[b * (half + 1) + q] = k(d);
        }
    }
}

double ring_weight(const BallGrid& g, std::size_t b) {
    std::size_t ib = b / g.n_mu, jb = b % g.n_mu;
    return g.w_r[ib] * g.r[ib] * g.r[ib] * g.w_mu[jb] * (2.0 * pi / g.n_phi);
}

cplx ring_row_sum(const BallGrid& g, const std::vector<cplx>& blk) {
    std::size_t half = g.n_phi / 2, n = g.n_phi;
    cplx s = 0.0;
    for (std::size_t b = 0; b < g.rings(); ++b) {
        cplx sb = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            std::size_t qq = q <= half ? q : n - q;
            sb += blk[b * (half + 1) + qq];
        }
        s += ring_weight(g, b) * sb;
    }
    return s;
}

// Circulant product for one target ring, into out[p] for the listed p.
void ring_apply(const BallGrid& g, const cplx* blk, const cplx& self, std::size_t a, const std::vector<cplx>& u,
                const std::vector<std::size_t>& phis, std::vector<cplx>& out) {
    std::size_t n = g.n_phi, half = n / 2;
    for (std::size_t p : phis) {
        cplx acc = 0.0;
        for (std::size_t b = 0; b < g.rings(); ++b) {
            const cplx* kb = blk + b * (half + 1);
            const cplx* ub = u.data() + b * n;
            cplx sb = 0.0;
            for (std::size_t q = 0; q < n; ++q) {
                std::size_t dq = p >= q ? p - q : p + n - q;
                std::size_t qq = dq <= half ? dq : n - dq;
                sb += kb[qq] * ub[q];
            }
            acc += ring_weight(g, b) * sb;
        }
        out[a * n + p] = acc + self * u[a * n + p];
    }
}

GridFunction apply_ball(const KernelSpec& k, const GridFunction& u, const std::shared_ptr<const BallGrid>& gp,
                        const std::vector<std::size_t>* targets) {
    const BallGrid& g = *gp;
    std::vector<cplx> a_r = radial_self_terms(k, g.r, g.R);
    std::vector<std::vector<std::size_t>> phis(g.rings());
    if (targets) {
        for (std::size_t t : *targets) {
            if (t >= g.size()) throw ContractError("apply: target index out of range");
            phis[t / g.n_phi].push_back(t % g.n_phi);
        }
    } else {
        for (auto& v : phis) {
            v.resize(g.n_phi);
            for (std::size_t p = 0; p < g.n_phi; ++p) v[p] = p;
        }
    }
    std::vector<cplx> out(g.size(), 0.0);
    parallel_for(g.rings(), [&](std::size_t a) {
        if (phis[a].empty()) return;
        std::vector<cplx> blk;
        ring_block(k, g, a, blk);
        cplx self = a_r[a / g.n_mu] - ring_row_sum(g, blk);
        ring_apply(g, blk.data(), self, a, u.values, phis[a], out);
    });
    return GridFunction(u.grid, std::move(out));
}

// Row i of the reduced operator (without storing it).
template <class Visit>
void radial_row(const KernelSpec& k, const RadialGrid& g, std::size_t i, const std::vector<cplx>& a_r, Visit&& visit) {
    double ri = g.radius(i), mi = g.cosine(i);
    cplx rowsum = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (j == i) continue;
        cplx kb = azimuthal_reduce_t(k, ri, mi, g.radius(j), g.cosine(j), g.n_phi, 1e-12);
        cplx b = g.weights[j] / (2.0 * pi) * kb;
        rowsum += b;
        visit(j, b);
    }
    visit(i, a_r[i / g.n_mu] - rowsum);
}

GridFunction apply_radial(const KernelSpec& k, const GridFunction& u, const std::shared_ptr<const RadialGrid>& gp,
                          const std::vector<std::size_t>* targets) {
    const RadialGrid& g = *gp;
    std::vector<cplx> a_r = radial_self_terms(k, g.r, g.R);
    std::vector<std::size_t> list;
    if (targets) {
        list = *targets;
        for (std::size_t t : list)
            if (t >= g.size()) throw ContractError("apply: target index out of range");
    } else {
        list.resize(g.size());
        for (std::size_t i = 0; i < list.size(); ++i) list[i] = i;
    }
    std::vector<cplx> out(g.size(), 0.0);
    parallel_for(list.size(), [&](std::size_t n) {
        std::size_t i = list[n];
        cplx acc = 0.0;
        radial_row(k, g, i, a_r, [&](std::size_t j, cplx b) { acc += b * u.values[j]; });
        out[i] = acc;
    });
    return GridFunction(u.grid, std::move(out));
}

}  // namespace

GridFunction apply_kernel(const KernelSpec& k, const GridFunction& u, const std::vector<std::size_t>* targets) {
    if (k.part != KernelPart::riesz) check_lambda(k.lambda);
    if (auto b = std::get_if<std::shared_ptr<const BallGrid>>(&u.grid)) return apply_ball(k, u, *b, targets);
    return apply_radial(k, u, std::get<std::shared_ptr<const RadialGrid>>(u.grid), targets);
}

GridFunction apply_G0(const GridFunction& u) { return apply_kernel({KernelPart::riesz, 1.0, Sign::plus}, u); }

GridFunction apply_K(double lambda, Sign sign, const GridFunction& u) {
    return apply_kernel({KernelPart::wave, lambda, sign}, u);
}

GridFunction apply_M(double lambda, const GridFunction& u) {
    return apply_kernel({KernelPart::correction, lambda, Sign::plus}, u);
}

GridFunction apply_G_boundary(double lambda, Sign sign, const GridFunction& u) {
    return apply_kernel({KernelPart::total, lambda, sign}, u);
}

std::pair<cplx, cplx> kernel_sums_at(const KernelSpec& k, const GridRef& g, const Vec3& x, const std::vector<cplx>& q) {
    if (q.size() != grid_size(g)) throw ContractError("kernel_sums_at: size mismatch");
    cplx s = 0.0, c = 0.0;
    if (auto b = std::get_if<std::shared_ptr<const BallGrid>>(&g)) {
        const BallGrid& G = **b;
        for (std::size_t j = 0; j < G.size(); ++j) {
            Vec3 d{x[0] - G.nodes[j][0], x[1] - G.nodes[j][1], x[2] - G.nodes[j][2]};
            double dist = norm(d);
            if (dist == 0.0) throw SingularityError("kernel_sums_at: point coincides with a node");
            cplx kv = G.weights[j] * k(dist);
            s += kv * q[j];
            c += kv;
        }
        return {s, c};
    }
    const RadialGrid& G = *std::get<std::shared_ptr<const RadialGrid>>(g);
    double r = norm(x);
    double mu = r > 0.0 ? x[2] / r : 1.0;
    for (std::size_t j = 0; j < G.size(); ++j) {
        cplx kv = G.weights[j] / (2.0 * pi) * azimuthal_reduce_t(k, r, mu, G.radius(j), G.cosine(j), G.n_phi, 1e-12);
        s += kv * q[j];
        c += kv;
    }
    return {s, c};
}

Eigen::MatrixXcd assemble_radial_operator(const KernelSpec& k, const RadialGrid& g) {
    std::vector<cplx> a_r = radial_self_terms(k, g.r, g.R);
    Eigen::MatrixXcd B(g.size(), g.size());
    parallel_for(g.size(), [&](std::size_t i) {
        radial_row(k, g, i, a_r, [&](std::size_t j, cplx b) { B(i, j) = b; });
    });
    return B;
}

BallOperator::BallOperator(const KernelSpec& k, std::shared_ptr<const BallGrid> g) : grid_(std::move(g)) {
    const BallGrid& G = *grid_;
    half_ = G.n_phi / 2;
    std::size_t nring = G.rings(), stride = nring * (half_ + 1);
    blocks_.resize(nring * stride);
    self_.resize(nring);
    std::vector<cplx> a_r = radial_self_terms(k, G.r, G.R);
    parallel_for(nring, [&](std::size_t a) {
        std::vector<cplx> blk;
        ring_block(k, G, a, blk);
        self_[a] = a_r[a / G.n_mu] - ring_row_sum(G, blk);
        std::copy(blk.begin(), blk.end(), blocks_.begin() + a * stride);
    });
}

std::vector<cplx> BallOperator::apply(const std::vector<cplx>& u) const {
    const BallGrid& G = *grid_;
    if (u.size() != G.size()) throw ContractError("BallOperator: size mismatch");
    std::vector<cplx> out(G.size());
    std::size_t stride = G.rings() * (half_ + 1);
    std::vector<std::size_t> all(G.n_phi);
    for (std::size_t p = 0; p < G.n_phi; ++p) all[p] = p;
    parallel_for(G.rings(), [&](std::size_t a) {
        ring_apply(G, blocks_.data() + a * stride, self_[a], a, u, all, out);
    });
    return out;
}

double Envelope::operator()(double r) const {
    double j = japanese(r);
    double v = constant * std::pow(j, -exponent);
    if (regime == Regime::power_log) v *= std::log(1.0 + j);
    return v;
}

const char* to_string(Envelope::Regime r) {
    switch (r) {
        case Envelope::Regime::power: return "power";
        case Envelope::Regime::power_log: return "power-log";
        case Envelope::Regime::saturated: return "saturated";
    }
    return "?";
}

Envelope envelope_for(double beta, double gamma, int n) {
    if (n < 1) throw DomainError("envelope_for: dimension must be positive");
    if (!(beta > 0.0 && beta < n)) throw DomainError("envelope_for: need 0 < beta < n");
    if (!(gamma > 0.0) || !(beta + gamma > n)) throw DomainError("envelope_for: need gamma > 0 and beta + gamma > n");
    Envelope e;
    if (gamma < n) {
        e.regime = Envelope::Regime::power;
        e.exponent = beta + gamma - n;
    } else if (gamma == n) {
        e.regime = Envelope::Regime::power_log;
        e.exponent = beta;
    } else {
        e.regime = Envelope::Regime::saturated;
        e.exponent = beta;
    }
    return e;
}

Envelope envelope_G0(double ell) {
    if (!(ell > 1.0)) throw DomainError("envelope_G0: need ell > 1");
    return envelope_for(2.0, ell, 3);
}

namespace {

// (1+t)^a - (1-t)^a for 0 <= t <= 1 without cancellation.
double power_gap(double t, double a) {
    if (t == 1.0) return std::pow(2.0, a);
    return std::expm1(a * std::log1p(t)) - std::expm1(a * std::log1p(-t));
}

// 2 pi int_{-1}^{1} (R^2 + r^2 - 2 R r c)^{-beta/2} dc
double shell_average(double beta, double R, double r) {
    if (R == 0.0) return 4.0 * pi * std::pow(r, -beta);
    if (r == 0.0) return 4.0 * pi * std::pow(R, -beta);
    double big = std::max(R, r), t = std::min(R, r) / big;
    if (beta == 2.0) {
        double lg = t < 1.0 ? std::log1p(2.0 * t / (1.0 - t)) : std::numeric_limits<double>::infinity();
        return 2.0 * pi / (R * r) * lg;
    }
    double a = 2.0 - beta;
    return 2.0 * pi * std::pow(big, a) * power_gap(t, a) / (R * r * a);
}

}  // namespace

double phi_convolution(double beta, double gamma, const Vec3& x, int n, double Rmax) {
    if (n != 3) throw DomainError("phi_convolution: only n = 3 is implemented");
    if (!(beta > 0.0 && beta < 3.0)) throw DomainError("phi_convolution: need 0 < beta < 3");
    if (!(beta + gamma > 3.0)) throw DomainError("phi_convolution: need beta + gamma > 3");
    using boost::math::quadrature::gauss_kronrod;
    double R = norm(x);
    auto f = [&](double r) {
        if (r == R) return 0.0;
        return r * r * std::pow(japanese(r), -gamma) * shell_average(beta, R, r);
    };
    auto piece = [&](double a, double b) {
        if (!(b > a)) return 0.0;
        double err;
        return gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-12, &err);
    };
    std::vector<double> cuts{0.0};
    if (R > 0.0) {
        for (double c : {0.5 * R, R, 2.0 * R})
            if (c < Rmax) cuts.push_back(c);
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += piece(cuts[i], cuts[i + 1]);
    double last = cuts.back();
    if (std::isinf(Rmax)) {
        double start = std::max(last, 1.0);
        total += piece(last, start);
        double err;
        total += gauss_kronrod<double, 61>::integrate(f, start, std::numeric_limits<double>::infinity(), 20, 1e-12, &err);
    } else {
        total += piece(last, Rmax);
    }
    return total;
}

}  // namespace relscatter
