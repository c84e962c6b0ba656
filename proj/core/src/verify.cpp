#include "relscatter/verify.hpp"

#include "relscatter/kernels.hpp"
#include "relscatter/parallel.hpp"
#include "relscatter/quadrature.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

namespace relscatter {

namespace {

// The planner is not thread safe; execution with new arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// C-infinity step: 0 at t <= 0, 1 at t >= 1.
double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

}  // namespace

struct PeriodicBox::Plans {
    fftw_plan forward = nullptr, backward = nullptr;
};

PeriodicBox::PeriodicBox(double L, std::size_t N) : L_(L), N_(N), plans_(std::make_unique<Plans>()) {
    if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("periodic box: half-width must be positive");
    if (!power_of_two(N)) throw ConfigError("periodic box: N must be a power of two");
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto* buf = fftw_alloc_complex(size());
    int n = static_cast<int>(N);
    plans_->forward = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    plans_->backward = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(buf);
    if (!plans_->forward || !plans_->backward) throw NumericalError("periodic box: FFT planning failed");
}

PeriodicBox::~PeriodicBox() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plans_->forward) fftw_destroy_plan(plans_->forward);
    if (plans_->backward) fftw_destroy_plan(plans_->backward);
}

Vec3 PeriodicBox::point(std::size_t idx) const {
    std::size_t i = idx / (N_ * N_), j = (idx / N_) % N_, k = idx % N_;
    double h = spacing();
    return {-L_ + h * i, -L_ + h * j, -L_ + h * k};
}

double PeriodicBox::wavenumber(std::size_t m) const {
    long mm = static_cast<long>(m);
    long n = static_cast<long>(N_);
    if (mm >= n / 2) mm -= n;
    return pi * mm / L_;
}

Vec3 PeriodicBox::snap(const Vec3& k) const {
    Vec3 out;
    double kmax = pi * (N_ / 2) / L_;
    for (int d = 0; d < 3; ++d) {
        double m = std::round(k[d] * L_ / pi);
        out[d] = pi * m / L_;
        if (std::abs(out[d]) >= kmax) throw DomainError("periodic box: wave vector beyond the Nyquist limit");
    }
    return out;
}

bool PeriodicBox::on_lattice(const Vec3& k, double tol) const {
    for (int d = 0; d < 3; ++d) {
        double m = k[d] * L_ / pi;
        if (std::abs(m - std::round(m)) > tol * std::max(1.0, std::abs(m))) return false;
    }
    return true;
}

std::vector<cplx> PeriodicBox::multiplier_apply(const std::vector<cplx>& u,
                                                const std::function<double(double)>& mult) const {
    if (u.size() != size()) throw ContractError("periodic box: field size does not match the lattice");
    std::size_t n = size();
    auto* buf = fftw_alloc_complex(n);
    std::memcpy(buf, u.data(), n * sizeof(fftw_complex));
    fftw_execute_dft(plans_->forward, buf, buf);
    // The lattice starts at -L, so its phase factors cancel between the two
    // transforms and only the symbol matters.
    std::vector<double> kw(N_);
    for (std::size_t m = 0; m < N_; ++m) kw[m] = wavenumber(m);
    double scale = 1.0 / static_cast<double>(n);
    parallel_for(N_, [&](std::size_t i) {
        for (std::size_t j = 0; j < N_; ++j)
            for (std::size_t k = 0; k < N_; ++k) {
                double xi = std::sqrt(kw[i] * kw[i] + kw[j] * kw[j] + kw[k] * kw[k]);
                double f = mult(xi) * scale;
                std::size_t idx = (i * N_ + j) * N_ + k;
                buf[idx][0] *= f;
                buf[idx][1] *= f;
            }
    });
    fftw_execute_dft(plans_->backward, buf, buf);
    std::vector<cplx> out(n);
    std::memcpy(static_cast<void*>(out.data()), buf, n * sizeof(fftw_complex));
    fftw_free(buf);
    return out;
}

std::vector<cplx> sqrt_laplacian_apply(const PeriodicBox& box, const std::vector<cplx>& u) {
    return box.multiplier_apply(u, [](double xi) { return xi; });
}

std::vector<cplx> laplacian_apply(const PeriodicBox& box, const std::vector<cplx>& u) {
    return box.multiplier_apply(u, [](double xi) { return xi * xi; });
}

double Window::operator()(double r, double L) const {
    double a = inner * L, b = outer * L;
    if (r <= a) return 1.0;
    if (r >= b) return 0.0;
    return 0.5 * (1.0 + std::cos(pi * (r - a) / (b - a)));
}

double eigen_residual(const ScatteredSolution& sol, const Potential& V, const PeriodicBox& box,
                      const Window& window) {
    if (!(window.inner >= 0.5 && window.outer <= 0.8 && window.inner < window.outer))
        throw ContractError("window must equal 1 on |x| <= 0.5 L and vanish beyond 0.8 L");
    if (!sol.psi_at) throw ContractError("eigen residual: solution cannot be evaluated off its grid");
    if (!box.on_lattice(sol.k))
        throw ContractError("eigen residual: wave vector is not on the dual lattice of the box");
    double L = box.L();
    std::size_t n = box.size();
    std::vector<cplx> u(n, 0.0);
    std::size_t N = box.N();
    parallel_for(N, [&](std::size_t i) {
        for (std::size_t jk = 0; jk < N * N; ++jk) {
            std::size_t idx = i * N * N + jk;
            Vec3 x = box.point(idx);
            double wv = window(norm(x), L);
            if (wv > 0.0) u[idx] = wv * sol.psi_at(x);
        }
    });
    std::vector<cplx> Hu = sqrt_laplacian_apply(box, u);
    double lam = norm(sol.k);
    std::vector<double> worst(N, 0.0);
    parallel_for(N, [&](std::size_t i) {
        for (std::size_t jk = 0; jk < N * N; ++jk) {
            std::size_t idx = i * N * N + jk;
            Vec3 x = box.point(idx);
            double r = norm(x);
            if (r > 0.4 * L) continue;
            double v = V(r);
            cplx res = Hu[idx] + (v - lam) * u[idx] + window(r, L) * v * sol.phi0(x);
            worst[i] = std::max(worst[i], std::abs(res));
        }
    });
    return *std::max_element(worst.begin(), worst.end());
}

std::vector<double> AnnulusNorms::midpoints() const {
    std::vector<double> m;
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) m.push_back(std::sqrt(radii[i] * radii[i + 1]));
    return m;
}

namespace {
std::vector<double> running(const std::vector<double>& v) {
    std::vector<double> c(v.size());
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) c[i] = (s += v[i]);
    return c;
}
}  // namespace

std::vector<double> AnnulusNorms::cumulative_condition() const { return running(condition); }
std::vector<double> AnnulusNorms::cumulative_field() const { return running(field); }

AnnulusNorms radiation_functional(const RadialField& u, double lambda, Sign sign, double s,
                                  const std::vector<double>& radii) {
    if (!(s > 0.5 && s < 1.0)) throw DomainError("radiation functional: weight exponent must lie in (1/2, 1)");
    if (!(lambda > 0.0)) throw DomainError("radiation functional: lambda must be positive");
    if (radii.size() < 2) throw DomainError("radiation functional: need at least one annulus");
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] >= 0.0 && radii[i] < radii[i + 1])) throw DomainError("radiation functional: radii must increase");
    AnnulusNorms out;
    out.radii = radii;
    std::size_t m = radii.size() - 1;
    out.condition.resize(m);
    out.field.resize(m);
    double sg = sgn(sign);
    for (std::size_t i = 0; i < m; ++i) {
        double a = radii[i], b = radii[i + 1];
        // One 32-point piece per oscillation period.
        std::size_t pieces = 1 + static_cast<std::size_t>(lambda * (b - a) / (2.0 * pi));
        double cond = 0.0, fld = 0.0;
        for (std::size_t p = 0; p < pieces; ++p) {
            QuadRule q = gauss_legendre(32, a + (b - a) * p / pieces, a + (b - a) * (p + 1) / pieces);
            for (std::size_t j = 0; j < q.size(); ++j) {
                double r = q.x[j];
                auto [val, der] = u(r);
                double wt = 4.0 * pi * r * r * std::pow(japanese(r), 2.0 * (s - 1.0)) * q.w[j];
                cond += wt * std::norm(der - sg * cplx(0.0, lambda) * val);
                fld += wt * std::norm(val);
            }
        }
        out.condition[i] = cond;
        out.field[i] = fld;
    }
    return out;
}

double radiation_gain(const AnnulusNorms& n) {
    // Slope of log(condition / field) against log radius; same as the
    // difference of the two decay fits.
    std::vector<double> mid = n.midpoints();
    if (mid.size() < 3) throw DomainError("radiation gain: need at least three annuli");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = static_cast<double>(mid.size());
    for (std::size_t i = 0; i < mid.size(); ++i) {
        if (!(n.condition[i] > 0.0 && n.field[i] > 0.0)) throw DomainError("radiation gain: annulus values must be positive");
        double x = std::log(mid[i]), y = std::log(n.field[i] / n.condition[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double symbol_cutoff(double xi_norm, double a, double b) {
    double q = xi_norm * xi_norm;
    double a2 = a * a, b2 = b * b;
    if (q <= 0.5 * a2) return smooth_step((q - 0.25 * a2) / (0.25 * a2));
    if (q >= 1.5 * b2) return smooth_step((2.0 * b2 - q) / (0.5 * b2));
    return 1.0;
}

SymbolCheck symbol_identity_check(cplx z, const std::vector<double>& xi_norms, double a, double b) {
    if (z.imag() == 0.0 && z.real() >= 0.0) throw DomainError("symbol check: z must lie off [0, inf)");
    if (!(a > 0.0 && a < b)) throw DomainError("symbol check: need 0 < a < b");
    SymbolCheck out;
    out.inner_margin = out.outer_margin = std::numeric_limits<double>::infinity();
    out.z_in_dab = z.real() >= a && z.real() <= b && std::abs(z.imag()) <= 0.5 * a;
    cplx z2 = z * z;
    double a2 = a * a, b2 = b * b;
    for (double xi : xi_norms) {
        if (!(xi >= 0.0) || !std::isfinite(xi)) throw DomainError("symbol check: |xi| must be finite and nonnegative");
        double q = xi * xi;
        cplx d = q - z2;
        double g = symbol_cutoff(xi, a, b);
        cplx whole = (xi + z) / d;
        cplx split = (z + g * xi) / d + (1.0 - g) * xi / d;
        // Absolute for moderate values, relative near the pole.
        double err = std::abs(whole - split) / std::max(1.0, std::abs(whole));
        out.identity_error = std::max(out.identity_error, err);
        if (q <= 0.5 * a2 || q >= 1.5 * b2) {
            out.inner_margin = std::min(out.inner_margin, std::abs(d) - 0.25 * a2);
            ++out.inner_count;
        }
        if (q >= 1.5 * b2) {
            out.outer_margin = std::min(out.outer_margin, std::abs(d) - q / 3.0);
            ++out.outer_count;
        }
    }
    return out;
}

}  // namespace relscatter
