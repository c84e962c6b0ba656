#include "relscatter/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace relscatter {

void legendre_pd(std::size_t n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (std::size_t k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

namespace {

QuadRule make_legendre(std::size_t n) {
    QuadRule q;
    q.x.resize(n);
    q.w.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess, then Newton.
        double th = std::numbers::pi * (i + 0.75) / (n + 0.5);
        double x = std::cos(th) * (1.0 - (n - 1.0) / (8.0 * n * n * n));
        double p = 0, dp = 1;
        for (int it = 0; it < 100; ++it) {
            legendre_pd(n, x, p, dp);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre_pd(n, x, p, dp);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.x[i] = -x;
        q.x[n - 1 - i] = x;
        q.w[i] = w;
        q.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) q.x[n / 2] = 0.0;
    return q;
}

QuadRule make_laguerre(std::size_t n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        J(i, i) = 2.0 * i + 1.0;
        if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = i + 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadRule q;
    q.x.resize(n);
    q.w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        q.x[i] = es.eigenvalues()(i);
        double v = es.eigenvectors()(0, i);
        q.w[i] = v * v;
    }
    return q;
}

template <class Make>
const QuadRule& cached(std::map<std::size_t, QuadRule>& cache, std::mutex& m, std::size_t n, Make make) {
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

}  // namespace

const QuadRule& gauss_legendre(std::size_t n) {
    static std::map<std::size_t, QuadRule> cache;
    static std::mutex m;
    return cached(cache, m, n, make_legendre);
}

QuadRule gauss_legendre(std::size_t n, double a, double b) {
    const QuadRule& ref = gauss_legendre(n);
    QuadRule q = ref;
    double h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (std::size_t i = 0; i < n; ++i) {
        q.x[i] = c + h * ref.x[i];
        q.w[i] = h * ref.w[i];
    }
    return q;
}

const QuadRule& gauss_laguerre(std::size_t n) {
    static std::map<std::size_t, QuadRule> cache;
    static std::mutex m;
    return cached(cache, m, n, make_laguerre);
}

}  // namespace relscatter
