#include "relscatter/farfield.hpp"
#include "relscatter/kernels.hpp"
#include "relscatter/partial_wave.hpp"
#include "relscatter/verify.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace relscatter;

namespace {

std::vector<cplx> plane_wave(const PeriodicBox& box, const Vec3& k) {
    std::vector<cplx> u(box.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(cplx(0.0, dot(k, box.point(i))));
    return u;
}

double sup(const std::vector<cplx>& a) {
    double m = 0.0;
    for (cplx c : a) m = std::max(m, std::abs(c));
    return m;
}

RadialField kernel_field(double lam, Sign s) {
    return [=](double r) { return std::pair<cplx, cplx>{g_boundary_fast(lam, s, r), g_boundary_deriv(lam, s, r)}; };
}

}  // namespace

TEST(PeriodicBox, Construction) {
    EXPECT_THROW(PeriodicBox(1.0, 12), ConfigError);
    EXPECT_THROW(PeriodicBox(0.0, 16), ConfigError);
    PeriodicBox b(2.0, 8);
    EXPECT_DOUBLE_EQ(b.spacing(), 0.5);
    EXPECT_DOUBLE_EQ(b.point(0)[0], -2.0);
    EXPECT_DOUBLE_EQ(b.wavenumber(1), pi / 2.0);
    EXPECT_DOUBLE_EQ(b.wavenumber(7), -pi / 2.0);
    EXPECT_TRUE(b.on_lattice(b.snap({0.3, 1.0, -2.2})));
    EXPECT_FALSE(b.on_lattice({0.3, 0.0, 0.0}));
}

TEST(SqrtLaplacian, LatticePlaneWavesAreEigenvectors) {
    PeriodicBox box(4.0, 16);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int t = 0; t < 20; ++t) {
        Vec3 k = box.snap({u(rng), u(rng), u(rng)});
        if (norm(k) == 0.0) continue;
        auto p = plane_wave(box, k);
        auto h = sqrt_laplacian_apply(box, p);
        double err = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) err = std::max(err, std::abs(h[i] - norm(k) * p[i]));
        EXPECT_LT(err, 1e-12 * norm(k));
    }
}

TEST(SqrtLaplacian, SquareIsLaplacian) {
    PeriodicBox box(3.0, 16);
    std::vector<cplx> u(box.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        Vec3 x = box.point(i);
        u[i] = std::exp(-dot(x, x)) * cplx(1.0 + x[0], x[1] * x[2]);
    }
    auto twice = sqrt_laplacian_apply(box, sqrt_laplacian_apply(box, u));
    auto lap = laplacian_apply(box, u);
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_LT(std::abs(twice[i] - lap[i]), 1e-12 * sup(lap));
}

TEST(SqrtLaplacian, RealEvenStaysReal) {
    PeriodicBox box(3.0, 16);
    std::vector<cplx> u(box.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        Vec3 x = box.point(i);
        u[i] = std::exp(-0.7 * dot(x, x));
    }
    auto h = sqrt_laplacian_apply(box, u);
    for (cplx c : h) EXPECT_LT(std::abs(c.imag()), 1e-13 * sup(h));
}

TEST(SqrtLaplacian, SelfAdjoint) {
    PeriodicBox box(2.0, 8);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n;
    std::vector<cplx> a(box.size()), b(box.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = {n(rng), n(rng)};
        b[i] = {n(rng), n(rng)};
    }
    auto ha = sqrt_laplacian_apply(box, a), hb = sqrt_laplacian_apply(box, b);
    cplx l = 0.0, r = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        l += std::conj(ha[i]) * b[i];
        r += std::conj(a[i]) * hb[i];
    }
    EXPECT_LT(std::abs(l - r), 1e-10 * std::abs(l));
}

TEST(Window, Profile) {
    Window w;
    EXPECT_EQ(w(0.0, 4.0), 1.0);
    EXPECT_EQ(w(2.0, 4.0), 1.0);
    EXPECT_EQ(w(3.2, 4.0), 0.0);
    EXPECT_NEAR(w(2.6, 4.0), 0.5, 1e-12);
}

TEST(EigenResidual, ZeroPotentialIsExact) {
    PeriodicBox box(4.0, 16);
    Potential zero = make_potential("zero", 0.0, 4.0);
    ScatteredSolution sol;
    sol.k = {0.0, 0.0, pi / 4};
    sol.lambda = pi / 4;
    sol.psi_at = [](const Vec3&) { return cplx(0.0); };
    EXPECT_EQ(eigen_residual(sol, zero, box), 0.0);
}

TEST(EigenResidual, Contracts) {
    PeriodicBox box(4.0, 16);
    Potential v = make_potential("japanese", 0.05, 4.0);
    ScatteredSolution sol;
    sol.k = {0.0, 0.0, pi / 4};
    sol.lambda = pi / 4;
    EXPECT_THROW(eigen_residual(sol, v, box), ContractError);
    sol.psi_at = [](const Vec3&) { return cplx(0.0); };
    EXPECT_THROW(eigen_residual(sol, v, box, Window{0.3, 0.8}), ContractError);
    EXPECT_THROW(eigen_residual(sol, v, box, Window{0.5, 0.9}), ContractError);
    sol.k = {0.0, 0.0, 0.7};
    EXPECT_THROW(eigen_residual(sol, v, box), ContractError);
}

TEST(EigenResidual, ConvergedBeatsTruncatedIterates) {
    PeriodicBox box(4.0, 32);
    Potential v = make_potential("japanese", 0.3, 4.0);
    Vec3 k{0.0, 0.0, pi / 4};
    auto g = std::make_shared<const BallGrid>(build_ball_grid(4.0, 10, 8, 16));
    BornOptions loose;
    loose.tol = 1.0;
    auto one = born_iterate(k, Sign::plus, v, g, loose);
    ASSERT_EQ(one.iterations, 1);
    auto full = born_iterate(k, Sign::plus, v, g);
    ScatteredSolution none = full;
    none.psi_at = [](const Vec3&) { return cplx(0.0); };
    double r0 = eigen_residual(none, v, box), r1 = eigen_residual(one, v, box), rc = eigen_residual(full, v, box);
    EXPECT_NEAR(r0, 0.3, 1e-12);
    EXPECT_GT(r0, r1);
    EXPECT_GT(r1, rc);
}

TEST(EigenResidual, WeakCouplingIsSmall) {
    PeriodicBox box(4.0, 32);
    Potential v = make_potential("japanese", 0.05, 4.0);
    PartialWaveOptions o;
    o.R = 8.0;
    auto sol = partial_wave_solve({0.0, 0.0, pi / 4}, Sign::plus, v, o);
    EXPECT_LE(eigen_residual(sol, v, box), 5e-2);
}

TEST(Radiation, SphericalWaveGainsOnePower) {
    // (d/dr - i lam)(e^{i lam r}/r) = -e^{i lam r}/r^2 exactly.
    double lam = 1.0;
    RadialField u = [lam](double r) {
        cplx e = std::exp(cplx(0.0, lam * r));
        return std::pair<cplx, cplx>{e / r, e * (cplx(0.0, lam) / r - 1.0 / (r * r))};
    };
    auto n = radiation_functional(u, lam, Sign::plus, 0.75, geometric_samples(10, 100, 1.2));
    EXPECT_NEAR(radiation_gain(n), 2.0, 0.05);
    auto mid = n.midpoints();
    for (std::size_t i = 0; i < mid.size(); ++i) {
        // condition / field per annulus is close to 1/r^2 at the annulus.
        double q = n.condition[i] / n.field[i] * mid[i] * mid[i];
        EXPECT_NEAR(q, 1.0, 0.05);
    }
}

TEST(Radiation, KernelDichotomy) {
    auto radii = geometric_samples(10, 100, 1.2);
    for (double lam : {0.5, 1.0, 2.0}) {
        auto out = radiation_functional(kernel_field(lam, Sign::plus), lam, Sign::plus, 0.75, radii);
        auto in = radiation_functional(kernel_field(lam, Sign::minus), lam, Sign::plus, 0.75, radii);
        EXPECT_GE(radiation_gain(out), 1.8) << lam;
        EXPECT_LT(std::abs(radiation_gain(in)), 0.2) << lam;
        // Wrong direction: the condition integral grows like the field itself.
        auto cc = in.cumulative_condition(), cf = in.cumulative_field();
        EXPECT_GT(cc.back() / cc.front(), 0.5 * cf.back() / cf.front()) << lam;
        auto oc = out.cumulative_condition();
        EXPECT_LT(oc.back() / oc.front(), 0.25 * cf.back() / cf.front()) << lam;
        // and the outgoing sum has nearly settled.
        EXPECT_LT(out.condition.back() / oc.back(), 0.02) << lam;
    }
}

TEST(Radiation, Contracts) {
    auto radii = geometric_samples(10, 100, 1.2);
    EXPECT_THROW(radiation_functional(kernel_field(1.0, Sign::plus), 1.0, Sign::plus, 0.5, radii), DomainError);
    EXPECT_THROW(radiation_functional(kernel_field(1.0, Sign::plus), 1.0, Sign::plus, 1.0, radii), DomainError);
    AnnulusNorms tiny;
    tiny.radii = {10, 20, 30};
    tiny.condition = {1, 1};
    tiny.field = {1, 1};
    EXPECT_ANY_THROW(radiation_gain(tiny));
}

TEST(Symbol, Cutoff) {
    double a = 1.0, b = 2.0;
    EXPECT_EQ(symbol_cutoff(0.0, a, b), 0.0);
    EXPECT_EQ(symbol_cutoff(0.49, a, b), 0.0);
    EXPECT_EQ(symbol_cutoff(std::sqrt(0.5), a, b), 1.0);
    EXPECT_EQ(symbol_cutoff(std::sqrt(6.0), a, b), 1.0);
    EXPECT_EQ(symbol_cutoff(std::sqrt(8.0) + 1e-9, a, b), 0.0);
    double prev = 0.0;
    for (double x = 0.5; x <= std::sqrt(0.5); x += 0.01) {
        double c = symbol_cutoff(x, a, b);
        EXPECT_GE(c, prev);
        prev = c;
    }
}

TEST(Symbol, IdentityAndMargins) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double err = 0.0, inner = INFINITY, outer = INFINITY;
    std::size_t ni = 0, no = 0;
    for (int t = 0; t < 10000; ++t) {
        cplx z(1.0 + u(rng), u(rng) - 0.5);
        if (z.imag() == 0.0) continue;
        auto c = symbol_identity_check(z, {6.0 * u(rng)}, 1.0, 2.0);
        EXPECT_TRUE(c.z_in_dab);
        err = std::max(err, c.identity_error);
        if (c.inner_count) inner = std::min(inner, c.inner_margin);
        if (c.outer_count) outer = std::min(outer, c.outer_margin);
        ni += c.inner_count;
        no += c.outer_count;
    }
    EXPECT_LE(err, 1e-12);
    EXPECT_GT(ni, 100u);
    EXPECT_GT(no, 100u);
    EXPECT_GE(inner, 0.0);
    EXPECT_GE(outer, 0.0);
}

TEST(Symbol, Contracts) {
    EXPECT_THROW(symbol_identity_check(cplx(2.0, 0.0), {1.0}, 1.0, 2.0), DomainError);
    EXPECT_THROW(symbol_identity_check(cplx(0.0, 0.0), {1.0}, 1.0, 2.0), DomainError);
    EXPECT_THROW(symbol_identity_check(cplx(1.0, 0.5), {1.0}, 2.0, 1.0), DomainError);
    EXPECT_NO_THROW(symbol_identity_check(cplx(-1.0, 0.0), {1.0}, 1.0, 2.0));
    EXPECT_FALSE(symbol_identity_check(cplx(5.0, 0.5), {1.0}, 1.0, 2.0).z_in_dab);
}
