#include "relscatter/partial_wave.hpp"

#include "relscatter/parallel.hpp"
#include "relscatter/quadrature.hpp"
#include "relscatter/specfun.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace relscatter {

namespace {
const cplx I(0.0, 1.0);

// Real part of the projected kernel 2 pi int g(d(c)) P_l(c) dc for l = 0..L:
//   Q_l(z) / (pi a b) - (lambda / (pi a b)) int f(lambda d) P_l(c(d)) dd - 2 lambda^2 j_l(lambda a<) y_l(lambda a>).
// The imaginary part +-2 lambda^2 j_l j_l is separable and handled by the caller.
class KernelRow {
public:
    explicit KernelRow(double lambda) : lambda_(lambda) {}

    void eval(double a, double b, std::size_t L, const double* jmin, const double* ymax, double* out) {
        double ab = a * b;
        double diff = a - b;
        q_.resize(L + 1);
        legendre_q(L, diff * diff / (2.0 * ab), q_.data());

        double lo = std::abs(diff), hi = a + b, W = hi - lo;
        std::size_t n;
        bool graded = lo < 0.1 * hi;
        n = graded ? 3 * L + 48 : L + 32;
        const QuadRule& g = gauss_legendre(n);
        c_.resize(n);
        fw_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            double d, wt;
            if (graded) {
                double t = 0.5 * (g.x[k] + 1.0);
                d = lo + W * t * t * t;
                wt = 1.5 * W * t * t * g.w[k];
            } else {
                d = lo + 0.5 * W * (g.x[k] + 1.0);
                wt = 0.5 * W * g.w[k];
            }
            double c = 1.0 - (d - lo) * (d + lo) / (2.0 * ab);
            c_[k] = std::clamp(c, -1.0, 1.0);
            fw_[k] = wt * aux_f_fast(lambda_ * d);
        }
        p0_.assign(n, 1.0);
        p1_.assign(c_.begin(), c_.end());
        double pre = 1.0 / (pi * ab);
        for (std::size_t l = 0; l <= L; ++l) {
            double m = 0.0;
            if (l == 0) {
                for (std::size_t k = 0; k < n; ++k) m += fw_[k];
            } else {
                if (l >= 2) {
                    double u = (2.0 * l - 1.0) / l, v = (l - 1.0) / l;
                    for (std::size_t k = 0; k < n; ++k) {
                        double pn = u * c_[k] * p1_[k] - v * p0_[k];
                        p0_[k] = p1_[k];
                        p1_[k] = pn;
                    }
                }
                for (std::size_t k = 0; k < n; ++k) m += fw_[k] * p1_[k];
            }
            out[l] = pre * (q_[l] - lambda_ * m) - 2.0 * lambda_ * lambda_ * jmin[l] * ymax[l];
        }
    }

private:
    double lambda_;
    std::vector<double> q_, c_, fw_, p0_, p1_;
};

std::vector<double> barycentric_weights(const std::vector<double>& x) {
    std::vector<double> bw(x.size(), 1.0);
    for (std::size_t m = 0; m < x.size(); ++m)
        for (std::size_t k = 0; k < x.size(); ++k)
            if (k != m) bw[m] /= (x[m] - x[k]);
    return bw;
}

void lagrange_basis(const std::vector<double>& x, const std::vector<double>& bw, double t, double* out) {
    double s = 0.0;
    for (std::size_t m = 0; m < x.size(); ++m) {
        if (t == x[m]) {
            for (std::size_t k = 0; k < x.size(); ++k) out[k] = k == m ? 1.0 : 0.0;
            return;
        }
        out[m] = bw[m] / (t - x[m]);
        s += out[m];
    }
    for (std::size_t m = 0; m < x.size(); ++m) out[m] /= s;
}

std::vector<double> make_edges(double R, double H) {
    std::vector<double> e{0.0};
    for (double b : {0.25, 0.5, 1.0, 2.0, 4.0})
        if (b < R * (1.0 - 1e-12)) e.push_back(b);
    double a = e.back();
    auto n = static_cast<std::size_t>(std::ceil((R - a) / H - 1e-9));
    n = std::max<std::size_t>(n, 1);
    for (std::size_t k = 1; k <= n; ++k) e.push_back(a + (R - a) * k / n);
    e.back() = R;
    return e;
}

}  // namespace

std::size_t partial_wave_cutoff(double lambda, double rho) {
    double x = lambda * rho;
    return static_cast<std::size_t>(x + 30.0 + 5.0 * std::cbrt(x));
}

std::size_t PartialWaveField::l_cut(double rho) const {
    return std::min(l_max, partial_wave_cutoff(lambda, rho));
}

std::vector<cplx> PartialWaveField::radial_all(double rho, std::size_t L) const {
    L = std::min(L, l_max);
    std::vector<cplx> out(L + 1, 0.0);
    if (rho <= R) {
        auto it = std::upper_bound(edges.begin(), edges.end(), rho);
        std::size_t k = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - edges.begin() - 1, 0), edges.size() - 2);
        double a = edges[k], b = edges[k + 1];
        std::vector<double> basis(order);
        lagrange_basis(xref, bw, (2.0 * rho - a - b) / (b - a), basis.data());
        for (std::size_t l = 0; l <= L; ++l)
            for (std::size_t m = 0; m < order; ++m) {
                std::size_t i = k * order + m;
                if (i >= first[l]) out[l] += basis[m] * waves[l][i - first[l]];
            }
        return out;
    }
    // Outside the ball the potential vanishes and the kernel is smooth.
    std::size_t N = r.size(), Lw = l_max + 1;
    KernelRow kr(lambda);
    std::vector<double> y(L + 1), jr(L + 1), K(L + 1);
    sph_bessel_y(L, lambda * rho, y.data());
    sph_bessel_j(L, lambda * rho, jr.data());
    double s_k = sgn(flip(sign));
    for (std::size_t j = 0; j < N; ++j) {
        if (vnode[j] == 0.0) continue;
        const double* Jj = jnode.data() + j * Lw;
        kr.eval(r[j], rho, L, Jj, y.data(), K.data());
        double c = w[j] * r[j] * r[j] * vnode[j];
        for (std::size_t l = 0; l <= L; ++l) {
            cplx u = Jj[l] + (j >= first[l] ? waves[l][j - first[l]] : cplx(0.0));
            cplx G(K[l], s_k * 2.0 * lambda * lambda * Jj[l] * jr[l]);
            out[l] -= c * G * u;
        }
    }
    return out;
}

cplx PartialWaveField::radial(std::size_t l, double rho) const {
    if (l > l_max) return 0.0;
    return radial_all(rho, l)[l];
}

cplx PartialWaveField::psi(const Vec3& x) const {
    double rho = norm(x);
    double mu = rho > 0.0 ? std::clamp(dot(x, khat) / rho, -1.0, 1.0) : 1.0;
    std::size_t L = rho <= R ? l_cut(rho) : l_max;
    std::vector<cplx> rad = radial_all(rho, L);
    cplx s = 0.0, il = 1.0;
    double p0 = 1.0, p1 = mu;
    for (std::size_t l = 0; l <= L; ++l) {
        double pl;
        if (l == 0) {
            pl = 1.0;
        } else if (l == 1) {
            pl = mu;
        } else {
            pl = ((2.0 * l - 1.0) * mu * p1 - (l - 1.0) * p0) / l;
            p0 = p1;
            p1 = pl;
        }
        s += (2.0 * l + 1.0) * il * rad[l] * pl;
        il *= I;
    }
    return s;
}

cplx PartialWaveField::amplitude(double c) const {
    double e = sign == Sign::plus ? -1.0 : 1.0;
    cplx s = 0.0;
    double p0 = 1.0, p1 = c, el = 1.0;
    for (std::size_t l = 0; l <= l_max; ++l) {
        double pl;
        if (l == 0) {
            pl = 1.0;
        } else if (l == 1) {
            pl = c;
        } else {
            pl = ((2.0 * l - 1.0) * c * p1 - (l - 1.0) * p0) / l;
            p0 = p1;
            p1 = pl;
        }
        s += (2.0 * l + 1.0) * el * pl * moments[l];
        el *= e;
    }
    return -2.0 * lambda * s;
}

std::shared_ptr<const PartialWaveField> partial_wave_field(const Vec3& k, Sign sign, const Potential& V,
                                                           const PartialWaveOptions& opt) {
    double lambda = norm(k);
    if (!(lambda > 0.0)) throw DomainError("partial_wave: |k| must be positive");
    if (!(opt.R > 0.0)) throw ConfigError("partial_wave: R must be positive");
    if (opt.order < 4 || opt.fine < 8) throw ConfigError("partial_wave: order >= 4 and fine >= 8 required");
    V.admit(opt.R);

    auto field = std::make_shared<PartialWaveField>();
    PartialWaveField& F = *field;
    F.lambda = lambda;
    F.sign = sign;
    F.khat = {k[0] / lambda, k[1] / lambda, k[2] / lambda};
    F.R = opt.R;
    F.V = V;
    double H = opt.panel_length > 0.0 ? opt.panel_length : std::min(12.0, 4.0 * pi / lambda);
    F.edges = make_edges(opt.R, H);
    std::size_t P = F.edges.size() - 1, p = opt.order;
    const QuadRule& ref = gauss_legendre(p);
    F.order = p;
    F.xref = ref.x;
    F.bw = barycentric_weights(ref.x);
    for (std::size_t k2 = 0; k2 < P; ++k2) {
        double a = F.edges[k2], b = F.edges[k2 + 1];
        for (std::size_t m = 0; m < p; ++m) {
            F.r.push_back(0.5 * (a + b) + 0.5 * (b - a) * ref.x[m]);
            F.w.push_back(0.5 * (b - a) * ref.w[m]);
        }
    }
    std::size_t N = F.r.size();
    F.l_max = partial_wave_cutoff(lambda, opt.R);
    std::size_t Lmax = F.l_max, Lw = Lmax + 1;

    std::vector<std::size_t> Ln(N);
    std::vector<double>& J = F.jnode;
    std::vector<double> Y(N * Lw, 0.0);
    J.resize(N * Lw);
    F.vnode.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        Ln[i] = F.l_cut(F.r[i]);
        sph_bessel_j(Lmax, lambda * F.r[i], J.data() + i * Lw);
        sph_bessel_y(Ln[i], lambda * F.r[i], Y.data() + i * Lw);
        F.vnode[i] = V(F.r[i]);
    }
    const std::vector<double>& v = F.vnode;
    F.first.resize(Lw);
    for (std::size_t l = 0; l <= Lmax; ++l) {
        std::size_t i = 0;
        while (i < N && Ln[i] < l) ++i;
        F.first[l] = i;
    }

    // Near range: own panel and both neighbours.
    std::vector<std::size_t> nlo(N), nhi(N);
    for (std::size_t i = 0; i < N; ++i) {
        std::size_t k2 = i / p;
        nlo[i] = (k2 == 0 ? 0 : k2 - 1) * p;
        nhi[i] = std::min(P, k2 + 2) * p;
    }

    // Regular pairs i <= j, all l <= Ln[i].
    std::vector<std::size_t> off(N + 1, 0);
    for (std::size_t i = 0; i < N; ++i) off[i + 1] = off[i] + (N - i) * (Ln[i] + 1);
    std::vector<double> reg(off[N], 0.0);
    parallel_for(N, [&](std::size_t i) {
        KernelRow kr(lambda);
        for (std::size_t j = std::max(i, nhi[i]); j < N; ++j)
            kr.eval(F.r[i], F.r[j], Ln[i], J.data() + i * Lw, Y.data() + j * Lw,
                    reg.data() + off[i] + (j - i) * (Ln[i] + 1));
    });

    // Product-integration weights for the near range of each row.
    std::vector<std::vector<double>> prod(N);
    const QuadRule& gf = gauss_legendre(opt.fine);
    parallel_for(N, [&](std::size_t i) {
        std::size_t L = Ln[i], k2 = i / p;
        double ri = F.r[i];
        std::vector<double>& Wp = prod[i];
        Wp.assign((nhi[i] - nlo[i]) * (L + 1), 0.0);
        KernelRow kr(lambda);
        std::vector<double> K(L + 1), bes(L + 1), basis(p);
        struct Piece {
            std::size_t panel;
            double anchor, span;
        };
        std::vector<Piece> pieces;
        if (k2 > 0) pieces.push_back({k2 - 1, F.edges[k2], F.edges[k2 - 1] - F.edges[k2]});
        pieces.push_back({k2, ri, F.edges[k2] - ri});
        pieces.push_back({k2, ri, F.edges[k2 + 1] - ri});
        if (k2 + 1 < P) pieces.push_back({k2 + 1, F.edges[k2 + 1], F.edges[k2 + 2] - F.edges[k2 + 1]});
        for (const Piece& pc : pieces) {
            double a = F.edges[pc.panel], b = F.edges[pc.panel + 1];
            for (std::size_t q = 0; q < gf.x.size(); ++q) {
                double t = 0.5 * (gf.x[q] + 1.0);
                double t3 = t * t * t;
                double rp = pc.anchor + pc.span * t3 * t;
                double wt = 0.5 * gf.w[q] * 4.0 * t3 * std::abs(pc.span);
                if (rp == ri) continue;  // weight below rounding of ri
                if (rp < ri) {
                    sph_bessel_j(L, lambda * rp, bes.data());
                    kr.eval(ri, rp, L, bes.data(), Y.data() + i * Lw, K.data());
                } else {
                    sph_bessel_y(L, lambda * rp, bes.data());
                    kr.eval(ri, rp, L, J.data() + i * Lw, bes.data(), K.data());
                }
                lagrange_basis(F.xref, F.bw, (2.0 * rp - a - b) / (b - a), basis.data());
                for (std::size_t m = 0; m < p; ++m) {
                    double c = wt * rp * rp * basis[m];
                    double* dst = Wp.data() + (pc.panel * p + m - nlo[i]) * (L + 1);
                    for (std::size_t l = 0; l <= L; ++l) dst[l] += c * K[l];
                }
            }
        }
    });

    // One dense solve per partial wave.
    double s_k = sgn(flip(sign));
    F.waves.assign(Lw, {});
    F.moments.assign(Lw, 0.0);
    std::vector<double> res(Lw, 0.0);
    parallel_for(Lw, [&](std::size_t l) {
        std::size_t f0 = F.first[l], n = N - f0;
        std::vector<cplx> u(N, 0.0);
        for (std::size_t j = 0; j < N; ++j) u[j] = J[j * Lw + l];
        if (n > 0) {
            Eigen::MatrixXcd A(n, n);
            Eigen::VectorXcd rhs(n);
            for (std::size_t ii = 0; ii < n; ++ii) {
                std::size_t i = f0 + ii;
                cplx acc = 0.0;
                for (std::size_t jj = 0; jj < n; ++jj) {
                    std::size_t j = f0 + jj;
                    double wr2 = F.w[j] * F.r[j] * F.r[j];
                    double wr;
                    if (j >= nlo[i] && j < nhi[i]) {
                        wr = prod[i][(j - nlo[i]) * (Ln[i] + 1) + l];
                    } else if (i <= j) {
                        wr = wr2 * reg[off[i] + (j - i) * (Ln[i] + 1) + l];
                    } else {
                        wr = wr2 * reg[off[j] + (i - j) * (Ln[j] + 1) + l];
                    }
                    cplx Wij = cplx(wr, s_k * 2.0 * lambda * lambda * wr2 * J[i * Lw + l] * J[j * Lw + l]);
                    A(ii, jj) = Wij * v[j];
                    acc += A(ii, jj) * J[j * Lw + l];
                }
                rhs[ii] = -acc;
            }
            A.diagonal().array() += 1.0;
            Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
            Eigen::VectorXcd x = lu.solve(rhs);
            res[l] = (A * x - rhs).cwiseAbs().maxCoeff();
            F.waves[l].assign(x.data(), x.data() + n);
            for (std::size_t ii = 0; ii < n; ++ii) u[f0 + ii] += x[ii];
        }
        cplx m = 0.0;
        for (std::size_t j = 0; j < N; ++j) m += F.w[j] * F.r[j] * F.r[j] * J[j * Lw + l] * v[j] * u[j];
        F.moments[l] = m;
    });
    F.residual = *std::max_element(res.begin(), res.end());
    if (!std::isfinite(F.residual)) throw NumericalError("partial_wave: non-finite solution");
    return field;
}

ScatteredSolution partial_wave_solve(const Vec3& k, Sign sign, const Potential& V, const PartialWaveOptions& opt) {
    auto field = partial_wave_field(k, sign, V, opt);
    ScatteredSolution sol;
    sol.k = k;
    sol.lambda = field->lambda;
    sol.sign = sign;
    sol.mode = "partial-wave";
    sol.iterations = static_cast<int>(field->l_max + 1);
    sol.residual = field->residual;
    sol.waves = field;
    sol.psi_at = [field](const Vec3& x) { return field->psi(x); };
    return sol;
}

}  // namespace relscatter
