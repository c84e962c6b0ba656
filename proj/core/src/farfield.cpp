#include "relscatter/farfield.hpp"

#include "relscatter/partial_wave.hpp"
#include "relscatter/quadrature.hpp"

#include <Eigen/QR>

#include <cmath>
#include <limits>

namespace relscatter {

namespace {
const cplx I(0.0, 1.0);

void check_unit(const Vec3& v, const char* what) {
    if (std::abs(norm(v) - 1.0) > 1e-10) throw DomainError(std::string(what) + " must be a unit vector");
}
}  // namespace

std::vector<double> geometric_samples(double r_min, double r_max, double ratio) {
    if (!(r_min > 0.0 && r_max > r_min && ratio > 1.0)) throw DomainError("geometric_samples: need 0 < r_min < r_max, ratio > 1");
    // Both ends included; the step is the largest one not exceeding ratio.
    auto n = static_cast<std::size_t>(std::ceil(std::log(r_max / r_min) / std::log(ratio) - 1e-12));
    std::vector<double> r(n + 1);
    for (std::size_t i = 0; i <= n; ++i) r[i] = r_min * std::pow(r_max / r_min, double(i) / n);
    r.back() = r_max;
    return r;
}

DecayFit fit_decay_exponent(const std::vector<double>& radii, const std::vector<double>& values) {
    if (radii.size() != values.size()) throw ContractError("fit_decay_exponent: size mismatch");
    if (radii.size() < 8) throw DomainError("fit_decay_exponent: at least 8 samples are needed");
    double lo = radii.front(), hi = radii.front();
    for (double r : radii) {
        if (!(r >= 1.0)) throw DomainError("fit_decay_exponent: radii must be >= 1");
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    if (hi < 10.0 * lo * (1.0 - 1e-9)) throw DomainError("fit_decay_exponent: samples must span a decade");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("fit_decay_exponent: values must be positive");

    std::size_t n = radii.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(radii[i]);
        my += std::log(values[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = std::log(radii[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(values[i]) - my);
    }
    double slope = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = std::log(values[i]) - my - slope * (std::log(radii[i]) - mx);
        ssr += e * e;
    }
    DecayFit fit;
    fit.exponent = -slope;
    fit.std_error = std::sqrt(ssr / (n - 2) / sxx);
    fit.r_min = lo;
    fit.r_max = hi;
    fit.samples = n;
    return fit;
}

cplx scattering_amplitude(double lambda, const Vec3& omega_x, const Vec3& omega_k, const ScatteredSolution& sol,
                          const Potential& V) {
    check_unit(omega_x, "scattering_amplitude: omega_x");
    check_unit(omega_k, "scattering_amplitude: omega_k");
    if (std::abs(lambda - sol.lambda) > 1e-12 * lambda)
        throw ContractError("scattering_amplitude: solution was computed at another energy");
    Vec3 kh{sol.k[0] / sol.lambda, sol.k[1] / sol.lambda, sol.k[2] / sol.lambda};
    if (norm(Vec3{kh[0] - omega_k[0], kh[1] - omega_k[1], kh[2] - omega_k[2]}) > 1e-10)
        throw ContractError("scattering_amplitude: omega_k is not the direction of the solution's wave vector");
    double s = sgn(sol.sign);
    if (sol.waves) return sol.waves->amplitude(dot(omega_x, omega_k));
    if (!sol.grid) throw ContractError("scattering_amplitude: solution carries no quadrature data");
    const GridRef& g = *sol.grid;
    cplx acc = 0.0;
    if (auto b = std::get_if<std::shared_ptr<const BallGrid>>(&g)) {
        const BallGrid& G = **b;
        for (std::size_t j = 0; j < G.size(); ++j)
            acc += G.weights[j] * std::exp(I * (s * lambda * dot(omega_x, G.nodes[j]))) * V(norm(G.nodes[j])) *
                   sol.phi[j];
    } else {
        // Axisymmetric about z: the azimuthal integral is 2 pi e^{..} J0(..).
        const RadialGrid& G = *std::get<std::shared_ptr<const RadialGrid>>(g);
        double mx = omega_x[2], sx = std::sqrt(std::max(0.0, 1.0 - mx * mx));
        for (std::size_t j = 0; j < G.size(); ++j) {
            double r = G.radius(j), m = G.cosine(j), sm = std::sqrt(std::max(0.0, 1.0 - m * m));
            acc += G.weights[j] * std::exp(I * (s * lambda * r * mx * m)) * std::cyl_bessel_j(0.0, lambda * r * sx * sm) *
                   V(r) * sol.phi[j];
        }
    }
    return -lambda / (2.0 * pi) * acc;
}

DecayFit planewave_diff_decay(const ScatteredSolution& sol, const Vec3& ray, const std::vector<double>& samples) {
    check_unit(ray, "planewave_diff_decay: ray");
    if (!sol.psi_at) throw ContractError("planewave_diff_decay: solution cannot be evaluated off the grid");
    std::vector<double> v(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        v[i] = std::abs(sol.psi_at({samples[i] * ray[0], samples[i] * ray[1], samples[i] * ray[2]}));
    DecayFit fit = fit_decay_exponent(samples, v);
    fit.ray = ray;
    return fit;
}

DecayFit farfield_error_decay(const ScatteredSolution& sol, cplx f, const Vec3& ray, const std::vector<double>& samples) {
    check_unit(ray, "farfield_error_decay: ray");
    if (!sol.psi_at) throw ContractError("farfield_error_decay: solution cannot be evaluated off the grid");
    double s = sgn(sol.sign);
    std::vector<double> v(samples.size());
    bool all_zero = true;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double r = samples[i];
        cplx psi = sol.psi_at({r * ray[0], r * ray[1], r * ray[2]});
        v[i] = std::abs(psi - f * std::exp(-I * (s * sol.lambda * r)) / r);
        all_zero = all_zero && v[i] == 0.0;
    }
    if (all_zero) {
        DecayFit fit;
        fit.saturated = true;
        fit.exponent = std::numeric_limits<double>::infinity();
        fit.r_min = samples.empty() ? 0.0 : samples.front();
        fit.r_max = samples.empty() ? 0.0 : samples.back();
        fit.samples = samples.size();
        fit.ray = ray;
        return fit;
    }
    DecayFit fit = fit_decay_exponent(samples, v);
    fit.ray = ray;
    return fit;
}

AmplitudeFit farfield_amplitude_fit(const ScatteredSolution& sol, const Vec3& ray, const std::vector<double>& samples,
                                    double correction_exponent) {
    check_unit(ray, "farfield_amplitude_fit: ray");
    if (!sol.psi_at) throw ContractError("farfield_amplitude_fit: solution cannot be evaluated off the grid");
    if (samples.size() < 8) throw DomainError("farfield_amplitude_fit: at least 8 samples are needed");
    if (!(correction_exponent > 0.0)) throw DomainError("farfield_amplitude_fit: correction exponent must be positive");
    double s = sgn(sol.sign), q = correction_exponent;
    std::size_t n = samples.size();
    Eigen::MatrixXcd A(n, 2);
    Eigen::VectorXcd g(n);
    for (std::size_t i = 0; i < n; ++i) {
        double r = samples[i];
        g[i] = r * sol.psi_at({r * ray[0], r * ray[1], r * ray[2]}) * std::exp(I * (s * sol.lambda * r));
        A(i, 0) = 1.0;
        A(i, 1) = std::pow(r, -q);
    }
    Eigen::VectorXcd c = A.colPivHouseholderQr().solve(g);
    AmplitudeFit fit;
    fit.amplitude = c[0];
    fit.raw = g[n - 1];
    fit.r_max = samples.back();
    fit.correction_exponent = q;
    return fit;
}

double farfield_correction_exponent(double sigma) {
    if (!(sigma > 3.0)) throw DomainError("farfield_correction_exponent: sigma must exceed 3");
    return sigma < 5.0 ? (sigma - 3.0) / 2.0 : 1.0;
}

namespace {

// int_T^inf h(r) e^{i a r} dr for smooth slowly varying h, from pieces of one
// half period up to a cutoff and two integration-by-parts terms beyond it.
template <class H, class DH>
cplx oscillatory_tail(H h, DH dh, double a, double T0, double cutoff) {
    double step = pi / a;
    cplx acc = 0.0;
    double t = T0;
    while (t < cutoff) {
        double t1 = std::min(cutoff, t + step);
        const QuadRule& g = gauss_legendre(24);
        for (std::size_t k = 0; k < g.x.size(); ++k) {
            double r = 0.5 * (t + t1) + 0.5 * (t1 - t) * g.x[k];
            acc += 0.5 * (t1 - t) * g.w[k] * h(r) * std::exp(I * (a * r));
        }
        t = t1;
    }
    cplx ia = I * a;
    acc += std::exp(ia * cutoff) * (-h(cutoff) / ia + dh(cutoff) / (ia * ia));
    return acc;
}

double japanese_pow(double r, double sigma) { return std::pow(1.0 + r * r, -0.5 * sigma); }

FarFieldSplit split_positive(double a, double sigma, double X) {
    double R0 = std::sqrt(X);
    FarFieldSplit out;
    double cutoff = std::max(20.0 * X, 2000.0 / a);

    // outer_plane: 4 pi e^{iaX} int r^2 u sin(ar)/(ar) dr.
    auto hp = [&](double r) { return r * japanese_pow(r, sigma) / a; };
    auto dhp = [&](double r) {
        double u = japanese_pow(r, sigma);
        return (u - sigma * r * r * u / (1.0 + r * r)) / a;
    };
    cplx op = oscillatory_tail(hp, dhp, a, R0, cutoff);
    out.outer_plane = 4.0 * pi * std::exp(I * (a * X)) * op.imag();

    // outer_wave: 2 pi int r u (e^{ia(X+r)} - e^{ia|X-r|}) / (i a X) dr.
    auto hw = [&](double r) { return r * japanese_pow(r, sigma) / X; };
    auto dhw = [&](double r) {
        double u = japanese_pow(r, sigma);
        return (u - sigma * r * r * u / (1.0 + r * r)) / X;
    };
    cplx w1 = std::exp(I * (a * X)) * oscillatory_tail(hw, dhw, a, R0, cutoff);
    cplx w2 = 0.0;
    if (R0 < X) {
        auto f = [&](double r) { return hw(r) * std::exp(I * (a * (X - r))); };
        w2 += integrate(f, R0, X, 1e-12);
    }
    w2 += std::exp(-I * (a * X)) * oscillatory_tail(hw, dhw, a, std::max(R0, X), cutoff);
    out.outer_wave = 2.0 * pi * (w1 - w2) / (I * a);

    // Inner pieces: Gauss-Legendre in the cosine, adaptive in the radius.
    auto inner = [&](double r, bool phase) {
        std::size_t n = 32 + static_cast<std::size_t>(2.0 * a * r);
        n = std::min<std::size_t>(n, 400);
        const QuadRule& g = gauss_legendre(n);
        cplx s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double c = g.x[k];
            double d = std::sqrt(std::max(0.0, X * X + r * r - 2.0 * X * r * c));
            if (phase) {
                double th = r * r * (1.0 - c * c) / (d + X - r * c);
                cplx one_minus = -2.0 * I * std::sin(0.5 * a * th) * std::exp(I * (0.5 * a * th));
                s += g.w[k] * std::exp(-I * (a * r * c)) * one_minus;
            } else {
                double dmx = (r * r - 2.0 * X * r * c) / (d + X);
                s += g.w[k] * (dmx / (X * d)) * std::exp(I * (a * d));
            }
        }
        return s;
    };
    auto fphase = [&](double r) { return r * r * japanese_pow(r, sigma) * inner(r, true); };
    auto famp = [&](double r) { return r * r * japanese_pow(r, sigma) * inner(r, false); };
    out.inner_phase = std::exp(I * (a * X)) / X * 2.0 * pi * integrate(fphase, 0.0, R0, 1e-11);
    out.inner_amp = 2.0 * pi * integrate(famp, 0.0, R0, 1e-11);
    return out;
}

}  // namespace

FarFieldSplit farfield_split(double a, double sigma, double X) {
    if (!(sigma > 3.0)) throw DomainError("farfield_split: sigma must exceed 3");
    if (!(X >= 1.0)) throw DomainError("farfield_split: |x| must be >= 1");
    if (a == 0.0) throw DomainError("farfield_split: a must be nonzero");
    if (a > 0.0) return split_positive(a, sigma, X);
    FarFieldSplit s = split_positive(-a, sigma, X);
    return {std::conj(s.outer_plane), std::conj(s.outer_wave), std::conj(s.inner_phase), std::conj(s.inner_amp)};
}

SplitExponents farfield_split_exponents(double sigma) {
    if (!(sigma > 3.0)) throw DomainError("farfield_split_exponents: sigma must exceed 3");
    return {(sigma - 3.0) / 2.0, (sigma - 1.0) / 2.0, std::min((sigma - 1.0) / 2.0, 2.0), std::min(sigma / 2.0, 2.0)};
}

}  // namespace relscatter
