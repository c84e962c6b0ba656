#include "relscatter/specfun.hpp"

#include "relscatter/quadrature.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace relscatter {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double series_radius = 4.0;

// Kahan-compensated complex accumulator.
struct Accum {
    cplx sum{0.0, 0.0}, c{0.0, 0.0};
    void add(cplx v) {
        cplx y = v - c;
        cplx t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

// sum_{n>=1} (-w)^n / (n n!)
cplx e1_power_sum(cplx w) {
    Accum acc;
    cplx term = 1.0;
    for (int n = 1; n < 500; ++n) {
        term *= -w / double(n);
        cplx t = term / double(n);
        acc.add(t);
        if (std::abs(t) < eps * 0.25 * std::abs(acc.sum) && n > 2) break;
    }
    return acc.sum;
}

cplx e1_scaled_series(cplx w) {
    cplx logw = std::log(w);
    if (w.imag() == 0.0 && w.real() < 0.0) logw = cplx(std::log(-w.real()), pi);
    return std::exp(w) * (-euler_gamma - logw - e1_power_sum(w));
}

// Modified Lentz on the continued fraction e^w E1(w) = 1/(w+1- 1/(w+3- 4/(w+5- ...))).
cplx e1_scaled_cf(cplx w) {
    const double tiny = 1e-300;
    cplx b = w + 1.0;
    cplx c = 1.0 / tiny;
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 1; i < 200000; ++i) {
        double a = -double(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        cplx del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw NumericalError("expint_e1_scaled: continued fraction did not converge");
}

// Asymptotic series for large |w|, truncated at the smallest term.
cplx e1_scaled_asymptotic(cplx w) {
    cplx sum = 1.0, term = 1.0;
    double last = 1.0;
    for (int n = 1; n < 200; ++n) {
        cplx next = term * (-double(n) / w);
        double mag = std::abs(next);
        if (mag > last) break;
        term = next;
        sum += term;
        last = mag;
        if (mag < eps * 0.1) break;
    }
    return sum / w;
}

cplx he_series(cplx z) {
    cplx z2 = z * z;
    Accum acc;
    cplx pw = 1.0;  // (-1)^m z^{2m} / (2m)!
    for (int m = 1; m < 400; ++m) {
        pw *= -z2 / (double(2 * m - 1) * double(2 * m));
        cplx t = pw / double(2 * m);
        acc.add(t);
        if (std::abs(t) <= eps * 0.25 * std::abs(acc.sum)) break;
    }
    return acc.sum;
}

cplx si_odd_series(cplx z) {
    cplx z2 = z * z;
    Accum acc;
    cplx pw = z;  // (-1)^m z^{2m+1} / (2m+1)!
    acc.add(pw);
    for (int m = 1; m < 400; ++m) {
        pw *= -z2 / (double(2 * m) * double(2 * m + 1));
        cplx t = pw / double(2 * m + 1);
        acc.add(t);
        if (std::abs(t) <= eps * 0.25 * std::abs(acc.sum)) break;
    }
    return acc.sum;
}

// Series is safe when |z| is small or z hugs the imaginary axis, where the
// terms do not cancel.
bool prefer_series(cplx z) {
    double a = std::abs(z);
    if (a <= series_radius) return true;
    return a <= 40.0 && std::abs(z.real()) <= 0.25 * std::abs(z.imag());
}

// E1(i z) and E1(-i z) for Re z > 0.
void e1_pair(cplx z, cplx& ep, cplx& em) {
    const cplx I(0.0, 1.0);
    cplx wp = I * z, wm = -I * z;
    ep = std::exp(-wp) * expint_e1_scaled(wp);
    em = std::exp(-wm) * expint_e1_scaled(wm);
}

}  // namespace

cplx expint_e1_scaled(cplx w) {
    double a = std::abs(w);
    if (a == 0.0) throw SingularityError("expint_e1_scaled: w = 0");
    if (a < 2.0) return e1_scaled_series(w);
    bool near_cut = w.real() < 0.0 && std::abs(w.imag()) < 0.5 * std::abs(w.real());
    if (a >= 40.0) return e1_scaled_asymptotic(w);
    if (near_cut) return e1_scaled_series(w);
    return e1_scaled_cf(w);
}

cplx ci_series(cplx z) {
    if (z == 0.0) throw SingularityError("ci: z = 0");
    return -euler_gamma - std::log(z) - he_series(z);
}

cplx si_series(cplx z) { return -pi / 2 + si_odd_series(z); }

cplx h_e(cplx z) {
    if (std::abs(z) <= series_radius || z == 0.0) return he_series(z);
    if (z.real() < 0.0) z = -z;  // even
    if (z.real() == 0.0) return he_series(z);
    return -euler_gamma - std::log(z) - ci_complex(z);
}

cplx ci_complex(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0)
        throw BranchError("ci_complex: argument on the branch cut (-inf, 0]");
    if (prefer_series(z)) return ci_series(z);
    if (z.real() < 0.0) {
        // h_e is even, so only the logarithm changes.
        double s = z.imag() > 0.0 ? 1.0 : -1.0;
        return ci_complex(-z) - cplx(0.0, pi * s);
    }
    cplx ep, em;
    e1_pair(z, ep, em);
    return 0.5 * (ep + em);
}

cplx si_complex(cplx z) {
    if (prefer_series(z) || z.real() == 0.0) return si_series(z);
    if (z.real() < 0.0) return -pi - si_complex(-z);
    cplx ep, em;
    e1_pair(z, ep, em);
    return (ep - em) / cplx(0.0, 2.0);
}

double ci_real(double rho) {
    if (!(rho > 0.0)) throw DomainError("ci_real: rho must be positive");
    if (rho <= 2.0) return ci_series(rho).real();
    cplx e = std::exp(cplx(0.0, -rho)) * expint_e1_scaled(cplx(0.0, rho));
    return e.real();
}

double si_real(double rho) {
    if (!(rho > 0.0)) throw DomainError("si_real: rho must be positive");
    if (rho <= 2.0) return si_series(rho).real();
    cplx e = std::exp(cplx(0.0, -rho)) * expint_e1_scaled(cplx(0.0, rho));
    return e.imag();
}

namespace {

constexpr double laguerre_switch = 4.0;
constexpr std::size_t laguerre_nodes = 64;

}  // namespace

double aux_f(double rho) {
    if (!(rho > 0.0)) throw DomainError("aux_f: rho must be positive");
    if (rho < laguerre_switch) {
        double c = ci_series(rho).real(), s = si_series(rho).real();
        return -(std::sin(rho) * c + std::cos(rho) * s);
    }
    const QuadRule& q = gauss_laguerre(laguerre_nodes);
    double sum = 0.0;
    for (std::size_t i = q.size(); i-- > 0;) {
        double t = q.x[i] / rho;
        sum += q.w[i] / (1.0 + t * t);
    }
    return sum / rho;
}

double aux_g(double rho) {
    if (!(rho > 0.0)) throw DomainError("aux_g: rho must be positive");
    if (rho < laguerre_switch) {
        double c = ci_series(rho).real(), s = si_series(rho).real();
        return std::cos(rho) * c - std::sin(rho) * s;
    }
    const QuadRule& q = gauss_laguerre(laguerre_nodes);
    double sum = 0.0;
    for (std::size_t i = q.size(); i-- > 0;) {
        double t = q.x[i] / rho;
        sum += q.w[i] * t / (1.0 + t * t);
    }
    return sum / rho;
}

}  // namespace relscatter

namespace relscatter {

namespace {

struct AuxTable {
    static constexpr double lo = 2.0, hi = 40.0, h = 1.0 / 64.0;
    std::vector<double> f, g;
    AuxTable() {
        std::size_t n = static_cast<std::size_t>((hi - lo) / h) + 2;
        f.resize(n);
        g.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double rho = lo + i * h;
            cplx e = expint_e1_scaled(cplx(0.0, rho));
            g[i] = e.real();
            f[i] = -e.imag();
        }
    }
};

const AuxTable& aux_table() {
    static const AuxTable t;
    return t;
}

void fg_asymptotic(double rho, double& f, double& g) {
    double inv2 = 1.0 / (rho * rho);
    double tf = 1.0 / rho, tg = inv2;
    f = tf;
    g = tg;
    for (int n = 1; n < 40; ++n) {
        double nf = -tf * (2.0 * n - 1.0) * (2.0 * n) * inv2;
        double ng = -tg * (2.0 * n) * (2.0 * n + 1.0) * inv2;
        if (std::abs(nf) > std::abs(tf)) break;
        tf = nf;
        tg = ng;
        f += tf;
        g += tg;
        if (std::abs(tf) < 1e-18 * f) break;
    }
}

}  // namespace

void aux_fg_fast(double rho, double& f, double& g) {
    if (!(rho > 0.0)) throw DomainError("aux_fg_fast: rho must be positive");
    if (rho < AuxTable::lo) {
        double c = ci_series(rho).real(), s = si_series(rho).real();
        double sn = std::sin(rho), cs = std::cos(rho);
        f = -(sn * c + cs * s);
        g = cs * c - sn * s;
        return;
    }
    if (rho >= AuxTable::hi) {
        fg_asymptotic(rho, f, g);
        return;
    }
    const AuxTable& t = aux_table();
    double u = (rho - AuxTable::lo) / AuxTable::h;
    std::size_t i = static_cast<std::size_t>(u);
    double s = u - i, h = AuxTable::h;
    double r0 = AuxTable::lo + i * h, r1 = r0 + h;
    // Values and first two derivatives at both ends: f' = -g, f'' = 1/rho - f,
    // g' = f - 1/rho, g'' = -g + 1/rho^2.
    double f0 = t.f[i], f1 = t.f[i + 1], g0 = t.g[i], g1 = t.g[i + 1];
    double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    double h00 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    double h10 = s - 6 * s3 + 8 * s4 - 3 * s5;
    double h20 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    double h01 = 10 * s3 - 15 * s4 + 6 * s5;
    double h11 = -4 * s3 + 7 * s4 - 3 * s5;
    double h21 = 0.5 * (s3 - 2 * s4 + s5);
    auto interp = [&](double v0, double d0, double dd0, double v1, double d1, double dd1) {
        return h00 * v0 + h * h10 * d0 + h * h * h20 * dd0 + h01 * v1 + h * h11 * d1 + h * h * h21 * dd1;
    };
    f = interp(f0, -g0, 1.0 / r0 - f0, f1, -g1, 1.0 / r1 - f1);
    g = interp(g0, f0 - 1.0 / r0, -g0 + 1.0 / (r0 * r0), g1, f1 - 1.0 / r1, -g1 + 1.0 / (r1 * r1));
}

}  // namespace relscatter

namespace relscatter {

void sph_bessel_j(std::size_t L, double x, double* out) {
    if (!(x >= 0.0)) throw DomainError("sph_bessel_j: x must be nonnegative");
    if (L == 0) {
        double tmp[2];
        sph_bessel_j(1, x, tmp);
        out[0] = tmp[0];
        return;
    }
    if (x == 0.0) {
        out[0] = 1.0;
        for (std::size_t l = 1; l <= L; ++l) out[l] = 0.0;
        return;
    }
    double top = std::max<double>(L, x);
    auto start = static_cast<std::size_t>(top + 20.0 + std::sqrt(40.0 * top));
    double fp = 0.0, f = 1.0;
    for (std::size_t l = start; l >= 1; --l) {
        double fm = (2.0 * l + 1.0) / x * f - fp;
        fp = f;
        f = fm;
        if (l - 1 <= L) out[l - 1] = f;
        if (std::abs(f) > 1e250) {
            f *= 1e-250;
            fp *= 1e-250;
            for (std::size_t m = l - 1; m <= L && m < start; ++m) out[m] *= 1e-250;
        }
    }
    double j0 = std::sin(x) / x;
    double j1;
    if (x < 0.5) {
        double x2 = x * x;
        j1 = x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0 * (1.0 - x2 / 88.0))));
    } else {
        j1 = (std::sin(x) / x - std::cos(x)) / x;
    }
    double m = std::max(std::abs(out[0]), std::abs(out[1]));
    double a0 = out[0] / m, a1 = out[1] / m;
    double scale = (j0 * a0 + j1 * a1) / (a0 * a0 + a1 * a1) / m;
    for (std::size_t l = 0; l <= L; ++l) out[l] *= scale;
}

void sph_bessel_y(std::size_t L, double x, double* out) {
    if (!(x > 0.0)) throw DomainError("sph_bessel_y: x must be positive");
    double c = std::cos(x), s = std::sin(x);
    out[0] = -c / x;
    if (L == 0) return;
    out[1] = -c / (x * x) - s / x;
    for (std::size_t l = 1; l < L; ++l) out[l + 1] = (2.0 * l + 1.0) / x * out[l] - out[l - 1];
}

void legendre_q(std::size_t L, double x, double* out) {
    if (!(x > 0.0)) throw DomainError("legendre_q: argument must exceed 1");
    double z = 1.0 + x;
    double q0 = 0.5 * std::log1p(2.0 / x);
    out[0] = q0;
    if (L == 0) return;
    double a = std::log1p(x + std::sqrt(x * (x + 2.0)));  // acosh z
    if (a * L <= 1.0) {
        out[1] = z * q0 - 1.0;
        for (std::size_t l = 1; l < L; ++l) out[l + 1] = ((2.0 * l + 1.0) * z * out[l] - l * out[l - 1]) / (l + 1.0);
        return;
    }
    // Q is the minimal solution: backward recurrence on the ratios Q_l / Q_{l-1}.
    auto start = L + static_cast<std::size_t>(40.0 / a) + 10;
    double rho = std::exp(-a);
    for (std::size_t l = start; l >= 1; --l) {
        rho = l / ((2.0 * l + 1.0) * z - (l + 1.0) * rho);
        if (l <= L) out[l] = rho;
    }
    for (std::size_t l = 1; l <= L; ++l) out[l] *= out[l - 1];
}

}  // namespace relscatter
