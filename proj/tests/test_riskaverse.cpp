#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "rankalloc/allocator.hpp"
#include "rankalloc/orderstats.hpp"
#include "rankalloc/riskaverse.hpp"
#include "support/grid_search.hpp"
#include "support/quadrature.hpp"

using namespace rankalloc;

namespace {

ModelParams params(int n, double nu, double b = 0.0, double a = 1.0) {
    ModelParams p;
    p.n = n;
    p.nu = nu;
    p.a = a;
    p.b = b;
    return p;
}

std::vector<double> dirichlet(std::mt19937_64& gen, int n, double margin) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& x : w) total += (x = e(gen));
    // Mix with the barycentre so every coordinate is at least `margin`.
    for (double& x : w) x = margin + (1.0 - n * margin) * x / total;
    return w;
}

void check_feasible(const WeightVector& w, double floor) {
    double sum = 0.0;
    for (double x : w) {
        CHECK(x >= floor - 1e-15);
        sum += x;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-10);
}

double max_abs_diff(const std::vector<double>& x, const std::vector<double>& y) {
    double out = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) out = std::max(out, std::abs(x[k] - y[k]));
    return out;
}

}  // namespace

TEST_CASE("variance of output examples") {
    const auto zero = covariance_matrix(3, 0.0);
    CHECK(variance_of_output(swp_weights(3, 0.0), params(3, 0.0), zero) == 0.0);

    const double m1 = oracle::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-13);
    const double m2 = oracle::integrate([](double x) { return x; }, 0.0, 1.0, 1e-13);
    CHECK(variance_of_output(WeightVector({1.0}), params(1, 0.5), covariance_matrix(1, 0.5)) ==
          doctest::Approx(m2 - m1 * m1).epsilon(1e-12));
    CHECK(variance_of_output(WeightVector({1.0}), params(1, 0.5), covariance_matrix(1, 0.5)) ==
          doctest::Approx(1.0 / 18.0).epsilon(1e-13));

    // Uniform order statistics: Cov(x_(i), x_(j)) = i (n + 1 - j) / ((n+1)^2 (n+2)) for i <= j.
    double classical = 0.0;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) classical += std::min(i, j) * (5.0 - std::max(i, j)) / 150.0;
    classical /= 16.0;
    // At nu = 1 the weights enter as w^0 = 1, so the weights themselves drop out.
    CHECK(variance_of_output(ewp_weights(4), params(4, 1.0), covariance_matrix(4, 1.0)) ==
          doctest::Approx(16.0 * classical).epsilon(1e-12));
    CHECK(variance_of_output(ewp_weights(4), params(4, 1.0, 0.0, 3.0), covariance_matrix(4, 1.0)) ==
          doctest::Approx(9.0 * 16.0 * classical).epsilon(1e-12));

    CHECK_THROWS_AS(variance_of_output(ewp_weights(3), params(3, 0.5), correlation_matrix(3, 0.5)), DomainError);
    CHECK_THROWS_AS(variance_of_output(ewp_weights(3), params(3, 0.5), covariance_matrix(4, 0.5)), DomainError);
    CHECK_THROWS_AS(variance_of_output(ewp_weights(4), params(3, 0.5), covariance_matrix(3, 0.5)), DomainError);
}

TEST_CASE("utility examples") {
    const auto cov = covariance_matrix(3, 0.4);
    const auto w = swp_weights(3, 0.4);
    const double mean = expected_output(w, params(3, 0.4), Pairing::Sorted);
    const double var = variance_of_output(w, params(3, 0.4), cov);
    CHECK(utility(w, params(3, 0.4, 0.0), cov) == doctest::Approx(mean).epsilon(1e-15));
    CHECK(utility(w, params(3, 0.4, 2.0), cov) == doctest::Approx(mean - var).epsilon(1e-14));
    CHECK(utility(w, params(3, 0.4, 0.1)) < utility(w, params(3, 0.4, 0.0)));
    CHECK(utility(w, params(3, 0.4, 2.0)) == doctest::Approx(utility(w, params(3, 0.4, 2.0), cov)).epsilon(1e-14));

    const auto report = make_report(w, params(3, 0.4, 2.0), cov, Method::SWP);
    CHECK(report.variance >= 0.0);
    CHECK(std::abs(report.utility - (report.expected_output - 0.5 * 2.0 * report.variance)) <= 1e-10);
    CHECK(report.method == Method::SWP);
}

TEST_CASE("optimizer config validation") {
    OptimizerConfig cfg;
    CHECK_NOTHROW(cfg.validate(3));
    cfg.floor = 0.5;
    CHECK_THROWS_AS(cfg.validate(3), DomainError);
    cfg = {};
    cfg.restarts = 0;
    CHECK_THROWS_AS(cfg.validate(3), DomainError);
    cfg = {};
    cfg.tolerance = 0.0;
    CHECK_THROWS_AS(cfg.validate(3), DomainError);
    CHECK_THROWS_AS(optimize_mean_variance(params(3, 0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(minimum_variance_weights(params(3, 0.0)), DomainError);
    CHECK_THROWS_AS(optimize_mean_variance(params(3, 0.5, -1.0)), DomainError);
}

TEST_CASE("projection onto the floored simplex") {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 6;
        const double floor = trial % 2 == 0 ? 0.0 : 0.02;
        std::vector<double> v(static_cast<std::size_t>(n));
        for (double& x : v) x = normal(gen);
        const auto proj = project_to_simplex(v, floor);
        double sum = 0.0;
        for (double x : proj) {
            CHECK(x >= floor - 1e-15);
            sum += x;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
        CHECK(max_abs_diff(project_to_simplex(proj, floor), proj) <= 1e-14);
        // Variational inequality of a Euclidean projection onto a convex set.
        for (int k = 0; k < 5; ++k) {
            const auto y = dirichlet(gen, n, floor);
            double inner = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) inner += (v[i] - proj[i]) * (y[i] - proj[i]);
            CHECK(inner <= 1e-12);
        }
    }
}

TEST_CASE("analytic gradient agrees with central differences") {
    std::mt19937_64 gen(11);
    const double h = 1e-6;
    int points = 0;
    for (int n : {2, 3, 5}) {
        for (double nu : {0.25, 0.6, 1.0}) {
            for (ObjectiveKind kind : {ObjectiveKind::MeanVariance, ObjectiveKind::MinVariance}) {
                const auto p = params(n, nu, 1.5, 1.2);
                const SolverObjective f(p, covariance_matrix(n, nu), kind);
                for (int k = 0; k < 6; ++k, ++points) {
                    auto w = dirichlet(gen, n, 0.02);
                    std::vector<double> grad(w.size());
                    f.gradient(w, grad);
                    for (std::size_t i = 0; i < w.size(); ++i) {
                        auto up = w;
                        auto down = w;
                        up[i] += h;
                        down[i] -= h;
                        const double fd = (f.value(up) - f.value(down)) / (2.0 * h);
                        CAPTURE(n);
                        CAPTURE(nu);
                        CAPTURE(i);
                        CHECK(std::abs(grad[i] - fd) <= 1e-5 * std::max(std::abs(fd), 1e-3));
                    }
                }
            }
        }
    }
    CHECK(points >= 100);
}

TEST_CASE("risk-neutral limit reproduces the sorted portfolio") {
    for (int n = 1; n <= 6; ++n) {
        for (double nu : {0.1, 0.25, 0.5, 0.75, 1.0}) {
            const auto out = optimize_mean_variance(params(n, nu, 0.0));
            const auto swp = swp_weights(n, nu);
            CAPTURE(n);
            CAPTURE(nu);
            CHECK(out.converged);
            CHECK(max_abs_diff(out.report.weights.values(), swp.values()) <= 1e-6);
            CHECK(out.report.method == Method::MeanVariance);
        }
    }
}

TEST_CASE("solver matches grid search for n in {2, 3}") {
    OptimizerConfig cfg;
    for (int n : {2, 3}) {
        for (double nu : {0.25, 0.5, 1.0}) {
            for (double b : {0.0, 1.0, 10.0}) {
                const auto p = params(n, nu, b);
                const auto out = optimize_mean_variance(p, cfg);
                const auto reference = oracle::grid_search(oracle::ReferenceObjective(p, false), n, cfg.floor);
                CAPTURE(n);
                CAPTURE(nu);
                CAPTURE(b);
                CHECK(max_abs_diff(out.report.weights.values(), reference) <= 1e-3);
                check_feasible(out.report.weights, cfg.floor);
            }
        }
        for (double nu : {0.25, 0.5, 1.0}) {
            const auto p = params(n, nu);
            const auto out = minimum_variance_weights(p, cfg);
            const auto reference = oracle::grid_search(oracle::ReferenceObjective(p, true), n, cfg.floor);
            CAPTURE(n);
            CAPTURE(nu);
            CHECK(max_abs_diff(out.report.weights.values(), reference) <= 1e-3);
            CHECK(out.report.method == Method::MinVariance);
        }
    }
}

TEST_CASE("very large risk aversion approaches minimum variance") {
    for (int n : {2, 3}) {
        for (double nu : {0.25, 0.5, 0.75}) {
            const auto heavy = optimize_mean_variance(params(n, nu, 1e6));
            const auto minvar = minimum_variance_weights(params(n, nu));
            CAPTURE(n);
            CAPTURE(nu);
            CHECK(max_abs_diff(heavy.report.weights.values(), minvar.report.weights.values()) <= 1e-3);
        }
    }
}

TEST_CASE("minimum variance examples") {
    const auto single = minimum_variance_weights(params(1, 0.5));
    CHECK(single.report.weights.values() == std::vector<double>{1.0});

    for (int n : {2, 3, 4, 6}) {
        for (double nu : {0.2, 0.5, 0.9}) {
            const auto p = params(n, nu);
            const auto cov = covariance_matrix(n, nu);
            const auto out = minimum_variance_weights(p);
            CHECK(out.report.variance <= variance_of_output(ewp_weights(n), p, cov) + 1e-12);
            CHECK(out.report.variance <= variance_of_output(swp_weights(n, nu), p, cov) + 1e-12);
        }
    }
}

TEST_CASE("solution dominates the equal and sorted portfolios") {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<int> pick_n(2, 6);
    std::uniform_real_distribution<double> pick_nu(0.05, 1.0);
    std::uniform_real_distribution<double> pick_b(0.0, 20.0);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = params(pick_n(gen), pick_nu(gen), pick_b(gen));
        const auto cov = covariance_matrix(p.n, p.nu);
        const auto out = optimize_mean_variance(p);
        CAPTURE(p.n);
        CAPTURE(p.nu);
        CAPTURE(p.b);
        CHECK(out.report.utility >= utility(ewp_weights(p.n), p, cov) - 1e-8);
        CHECK(out.report.utility >= utility(swp_weights(p.n, p.nu), p, cov) - 1e-8);
        if (out.converged) CHECK(out.stationarity <= OptimizerConfig{}.tolerance);
        check_feasible(out.report.weights, OptimizerConfig{}.floor);
        CHECK(out.starts_agreeing >= 1);
        CHECK(out.restarts.size() == static_cast<std::size_t>(OptimizerConfig{}.restarts));
    }
}

TEST_CASE("variance and mean fall as risk aversion grows") {
    for (int n : {2, 3, 5}) {
        for (double nu : {0.25, 0.5, 1.0}) {
            double last_var = INFINITY;
            double last_mean = INFINITY;
            for (double b : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
                const auto out = optimize_mean_variance(params(n, nu, b));
                CAPTURE(n);
                CAPTURE(nu);
                CAPTURE(b);
                CHECK(out.report.variance <= last_var + 1e-8);
                CHECK(out.report.expected_output <= last_mean + 1e-8);
                last_var = out.report.variance;
                last_mean = out.report.expected_output;
            }
        }
    }
}

TEST_CASE("parallel restarts give the same answer") {
    OptimizerConfig serial;
    OptimizerConfig parallel;
    parallel.parallel = true;
    for (double b : {0.0, 3.0}) {
        const auto p = params(5, 0.4, b);
        const auto x = optimize_mean_variance(p, serial);
        const auto y = optimize_mean_variance(p, parallel);
        CHECK(x.report.weights.values() == y.report.weights.values());
        CHECK(x.report.utility == y.report.utility);
    }
}
