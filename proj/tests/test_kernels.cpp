#include "oracles.hpp"

#include "relscatter/kernels.hpp"
#include "relscatter/specfun.hpp"

#include <gtest/gtest.h>

using namespace relscatter;

namespace {
ComplexEnergy E(cplx z) { return ComplexEnergy::interior(z); }
}  // namespace

TEST(PoissonKernel, ValueAndNormalization) {
    EXPECT_DOUBLE_EQ(poisson_kernel(1.0, 0.0), 1.0 / (pi * pi));
    double total = oracle::half_line([](double r) { return 4.0 * pi * r * r * poisson_kernel(2.0, r); });
    EXPECT_NEAR(total, 1.0, 1e-8);
    EXPECT_THROW(poisson_kernel(0.0, 1.0), DomainError);
    EXPECT_THROW(poisson_kernel(1.0, -1.0), DomainError);
}

TEST(ComplexEnergy, RejectsPositiveAxis) {
    EXPECT_THROW(ComplexEnergy::interior(2.0), DomainError);
    EXPECT_THROW(ComplexEnergy::interior(0.0), DomainError);
    EXPECT_THROW(ComplexEnergy::boundary(-1.0, Sign::plus), DomainError);
    EXPECT_NO_THROW(ComplexEnergy::interior(cplx(-1.0, 0.0)));
}

TEST(ResolventKernel, LaplaceIdentityPointwise) {
    EXPECT_LT(std::abs(g_z(E(-1.0), 1.0) - oracle::laplace(-1.0, 1.0)), 1e-8 * std::abs(oracle::laplace(-1.0, 1.0)));
    EXPECT_LT(std::abs(g_z(E(-2.0), 5.0) - oracle::laplace(-2.0, 5.0)), 1e-8 * std::abs(oracle::laplace(-2.0, 5.0)));
    cplx z(-3.0, 1.0);
    EXPECT_LT(std::abs(laplace_oracle(z, 2.0) - g_z(E(z), 2.0)), 1e-9 * std::abs(g_z(E(z), 2.0)));
    EXPECT_LT(std::abs(laplace_oracle(-1.0, 1.0) - (1.0 / (2 * pi * pi) + ell_z(E(-1.0), 1.0))), 1e-10);
}

TEST(ResolventKernel, LaplaceIdentityOnGrid) {
    double worst = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            for (int m = 0; m < 5; ++m) {
                cplx z(-3.0 + 2.5 * i / 4.0, -2.0 + j);
                double a = 0.1 * std::pow(200.0, m / 4.0);
                cplx ref = oracle::laplace(z, a);
                worst = std::max(worst, std::abs(g_z(E(z), a) - ref) / std::abs(ref));
            }
    EXPECT_LT(worst, 1e-8);
}

TEST(ResolventKernel, OracleRejectsGrowingExponent) {
    EXPECT_THROW(laplace_oracle(cplx(0.5, 1.0), 1.0), DomainError);
    // For negative z the Riesz and wave parts cancel at leading order and the
    // kernel falls like 1 / (pi^2 a^4).
    EXPECT_NEAR(laplace_oracle(-1.0, 1e3).real() * pi * pi * 1e12, 1.0, 1e-3);
}

TEST(ResolventKernel, Reflection) {
    for (cplx z : {cplx(-1.0, 0.3), cplx(2.0, 0.5), cplx(0.5, -3.0)}) {
        EXPECT_LT(std::abs(std::conj(ell_z(E(z), 2.0)) - ell_z(E(std::conj(z)), 2.0)), 1e-13);
        EXPECT_LT(std::abs(std::conj(g_z(E(z), 0.7)) - g_z(E(std::conj(z)), 0.7)), 1e-12);
    }
}

TEST(ResolventKernel, RieszPartDominatesAtOrigin) {
    for (double r : {1e-3, 1e-5})
        EXPECT_NEAR((g_z(E(-1.0), r) * (2 * pi * pi * r * r)).real(), 1.0, 10 * r);
    EXPECT_THROW(g_z(E(-1.0), 0.0), SingularityError);
}

TEST(ResolventKernel, BoundaryLimitMonotone) {
    for (double lam : {0.5, 1.0, 2.0})
        for (double r : {0.5, 2.0, 10.0}) {
            cplx target = g_boundary(lam, Sign::plus, r).total;
            cplx target_minus = g_boundary(lam, Sign::minus, r).total;
            double prev = INFINITY;
            for (double mu : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
                double d = std::abs(g_z(E({lam, mu}), r) - target) / std::abs(target);
                EXPECT_LT(d, prev);
                prev = d;
                EXPECT_LT(std::abs(g_z(E({lam, -mu}), r) - target_minus), 2.0 * d * std::abs(target));
            }
            // The gap is first order in mu, about mu * r relative.
            EXPECT_LT(prev, 3e-5 * std::max(r, 1.0));
        }
}

TEST(CorrectionTerm, DualPathAndScaling) {
    // Small arguments through ci/si directly, large ones through the Laplace form.
    auto direct = [](double lam, double r) {
        double x = lam * r;
        return lam / (2 * pi * pi * r) * (std::sin(x) * oracle::ci(x) + std::cos(x) * oracle::si(x));
    };
    EXPECT_LT(std::abs(m_lambda(1.0, 2.0) - direct(1.0, 2.0)), 1e-10);
    EXPECT_LT(std::abs(m_lambda(0.5, 0.3) - direct(0.5, 0.3)), 1e-10);
    for (double r : {0.01, 0.4, 3.0, 80.0}) {
        EXPECT_NEAR(m_lambda(2.0, r), 4.0 * m_lambda(1.0, 2.0 * r), 1e-13 * std::abs(m_lambda(2.0, r)));
        EXPECT_NEAR(m_lambda_fast(1.0, r), m_lambda(1.0, r), 1e-12 * std::abs(m_lambda(1.0, r)));
    }
    double sup = 0.0;
    for (int i = 0; i < 200; ++i) {
        double r = 0.01 * std::pow(1e6, i / 199.0);
        sup = std::max(sup, r * japanese(r) * std::abs(m_lambda(1.0, r)));
    }
    EXPECT_LT(sup, 0.2);
}

TEST(CorrectionTerm, DerivativeMatchesDifferenceQuotient) {
    for (double r : {0.05, 0.9, 4.0, 30.0}) {
        double h = 1e-4 * r;
        double fd = (m_lambda(1.0, r - 2 * h) - 8 * m_lambda(1.0, r - h) + 8 * m_lambda(1.0, r + h) -
                     m_lambda(1.0, r + 2 * h)) / (12 * h);
        EXPECT_NEAR(m_lambda_deriv(1.0, r), fd, 1e-8 * std::abs(fd));
    }
}

TEST(BoundaryKernel, Decomposition) {
    KernelValue v = g_boundary(1.0, Sign::plus, 3.0);
    cplx wave = std::exp(cplx(0.0, 3.0)) / (2 * pi * 3.0);
    EXPECT_LT(std::abs(v.total - v.riesz - v.correction - wave), 1e-15);
    EXPECT_DOUBLE_EQ(v.riesz, 1.0 / (2 * pi * pi * 9.0));
    KernelValue m = g_boundary(1.0, Sign::minus, 3.0);
    EXPECT_LT(std::abs(std::conj(v.total) - m.total), 1e-16);
    for (double r : {0.2, 3.0, 40.0})
        EXPECT_LT(std::abs(g_boundary_fast(0.7, Sign::plus, r) - g_boundary(0.7, Sign::plus, r).total),
                  1e-12 * std::abs(g_boundary(0.7, Sign::plus, r).total));
}

TEST(BoundaryKernel, SphericalWaveLeadsAtInfinity) {
    double worst = 0.0;
    for (double r = 10.0; r < 1e4; r *= 1.3) {
        cplx lead = std::exp(cplx(0.0, r)) / (2 * pi * r);
        worst = std::max(worst, std::abs(g_boundary(1.0, Sign::plus, r).total - lead) * r * r);
    }
    EXPECT_LT(worst, 0.1);
}

TEST(BoundaryKernel, DerivativeMatchesDifferenceQuotient) {
    for (Sign s : {Sign::plus, Sign::minus})
        for (double r : {0.3, 2.0, 17.0}) {
            double h = 1e-4 * r;
            auto g = [&](double t) { return g_boundary(1.3, s, t).total; };
            cplx fd = (g(r - 2 * h) - 8.0 * g(r - h) + 8.0 * g(r + h) - g(r + 2 * h)) / (12 * h);
            EXPECT_LT(std::abs(g_boundary_deriv(1.3, s, r) - fd), 1e-8 * std::abs(fd));
        }
}

TEST(BoundaryKernel, LocalEnvelope) {
    // |g_{lambda +- i mu}(r)| <= C / r^2 near the origin and bounded on [1, a].
    for (double mu : {0.5, 1e-3})
        for (double r : {1e-3, 0.1, 0.5, 1.0, 5.0, 20.0}) {
            double bound = r <= 1.0 ? 1.0 / (r * r) : 1.0;
            EXPECT_LT(std::abs(g_z(E({1.0, mu}), r)), bound);
            EXPECT_LT(std::abs(g_z(E({1.0, -mu}), r)), bound);
        }
}
