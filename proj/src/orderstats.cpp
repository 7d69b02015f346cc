#include "rankalloc/orderstats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

namespace rankalloc {
namespace {

double lgam(double x) { return boost::math::lgamma(x); }

void check_n(int n) {
    if (n < 1) throw DomainError(fmt::format("n must be >= 1, got {}", n));
}

void check_series_nu(double nu) {
    if (!(nu > 0.0 && nu <= 1.0)) {
        throw DomainError(fmt::format("joint moments need 0 < nu <= 1, got {}", nu));
    }
}

// ln E[x_(i)^nu] = ln Gamma(i+nu) - ln Gamma(i) + ln Gamma(n+1) - ln Gamma(n+1+nu).
// The (n-i+1) factors of the two beta functions cancel exactly.
double log_moment(int i, int n, double nu) {
    return lgam(i + nu) - lgam(i) + lgam(n + 1.0) - lgam(n + 1.0 + nu);
}

// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

}  // namespace

double log_beta(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw DomainError(fmt::format("log_beta needs positive arguments, got ({}, {})", alpha, beta));
    }
    return lgam(alpha) + lgam(beta) - lgam(alpha + beta);
}

double order_statistic_pdf(double x, RankIndex i, int n) {
    check_n(n);
    i.check(n);
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(fmt::format("x = {} outside [0, 1]", x));
    const int r = i.value();
    // pow(0, 0) == 1 keeps the boundary values of the extreme ranks correct.
    const double kernel = std::pow(x, r - 1) * std::pow(1.0 - x, n - r);
    return kernel * std::exp(-log_beta(r, n - r + 1.0));
}

double moment_of_order_statistic(RankIndex i, int n, double nu) {
    check_n(n);
    i.check(n);
    if (!(nu > -1.0)) throw DomainError(fmt::format("moment order nu must exceed -1, got {}", nu));
    if (nu == 0.0) return 1.0;
    return std::exp(log_moment(i.value(), n, nu));
}

ProbabilityVector p_vector(int n, double nu) {
    check_n(n);
    if (!(nu > -1.0)) throw DomainError(fmt::format("p_vector needs nu > -1, got {}", nu));
    ProbabilityVector out;
    out.p.resize(static_cast<std::size_t>(n));
    const double scale = std::log1p(nu) - std::log(static_cast<double>(n));
    for (int i = 1; i <= n; ++i) {
        out.p[static_cast<std::size_t>(i - 1)] = nu == 0.0 ? 1.0 / n : std::exp(scale + log_moment(i, n, nu));
    }
    return out;
}

SeriesEvaluation joint_moment_series(RankIndex i, RankIndex j, int n, double nu, double tol) {
    check_n(n);
    i.check(n);
    j.check(n);
    check_series_nu(nu);
    if (!(tol > 0.0)) throw DomainError(fmt::format("series tolerance must be positive, got {}", tol));

    if (i.value() == j.value()) {
        return {moment_of_order_statistic(i, n, 2.0 * nu), 0};
    }
    const int lo = std::min(i.value(), j.value());
    const int hi = std::max(i.value(), j.value());

    CompensatedSum sum;
    double term = 1.0;
    sum.add(term);
    int quiet = 0;
    std::size_t k = 1;
    for (; k < kSeriesTermCap; ++k) {
        const double kd = static_cast<double>(k);
        term *= -(nu - kd + 1.0) / kd * (n + kd - hi) / (nu + n + kd);
        sum.add(term);
        if (std::abs(term) < tol * std::abs(sum.value())) {
            if (++quiet >= kSeriesQuietRun) break;
        } else {
            quiet = 0;
        }
    }
    const double prefactor = moment_of_order_statistic(RankIndex{lo}, n, nu);
    if (k >= kSeriesTermCap) {
        throw ConvergenceError(
            fmt::format("joint moment series for ({}, {}), n={}, nu={} did not settle in {} terms",
                        lo, hi, n, nu, kSeriesTermCap),
            prefactor * sum.value(), k);
    }
    return {prefactor * sum.value(), k + 1};
}

double joint_moment(RankIndex i, RankIndex j, int n, double nu, double tol) {
    return joint_moment_series(i, j, n, nu, tol).value;
}

MomentMatrix joint_moment_matrix(int n, double nu, double tol) {
    check_n(n);
    check_series_nu(nu);
    const auto size = static_cast<std::size_t>(n);
    MomentMatrix m(size, MatrixKind::RawJoint);
    for (int i = 1; i <= n; ++i) {
        for (int j = i; j <= n; ++j) {
            const double v = joint_moment(RankIndex{i}, RankIndex{j}, n, nu, tol);
            m(i - 1, j - 1) = v;
            m(j - 1, i - 1) = v;
        }
    }
    return m;
}

MomentMatrix covariance_matrix(int n, double nu, double tol) {
    check_n(n);
    if (nu == 0.0) return MomentMatrix(static_cast<std::size_t>(n), MatrixKind::Covariance);
    check_series_nu(nu);

    const auto size = static_cast<std::size_t>(n);
    std::vector<double> mean(size);
    for (int i = 1; i <= n; ++i) mean[static_cast<std::size_t>(i - 1)] = moment_of_order_statistic(RankIndex{i}, n, nu);

    const MomentMatrix raw = joint_moment_matrix(n, nu, tol);
    MomentMatrix v(size, MatrixKind::Covariance);
    for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t c = r; c < size; ++c) {
            const double cov = raw(r, c) - mean[r] * mean[c];
            v(r, c) = cov;
            v(c, r) = cov;
        }
    }
    return v;
}

MomentMatrix correlation_from_covariance(const MomentMatrix& cov) {
    if (cov.kind() != MatrixKind::Covariance) {
        throw DomainError(fmt::format("expected a covariance matrix, got {}", to_string(cov.kind())));
    }
    const std::size_t size = cov.size();
    for (std::size_t k = 0; k < size; ++k) {
        if (!(cov(k, k) > 0.0)) {
            throw DomainError(fmt::format("variance of rank {} is {}, correlation undefined", k + 1, cov(k, k)));
        }
    }
    MomentMatrix rho(size, MatrixKind::Correlation);
    for (std::size_t r = 0; r < size; ++r) {
        rho(r, r) = 1.0;
        for (std::size_t c = r + 1; c < size; ++c) {
            const double value = cov(r, c) / std::sqrt(cov(r, r) * cov(c, c));
            rho(r, c) = value;
            rho(c, r) = value;
        }
    }
    return rho;
}

MomentMatrix correlation_matrix(int n, double nu, double tol) {
    if (nu == 0.0) {
        throw DomainError("correlations are undefined at nu = 0: every x^0 is the constant 1 and has zero variance");
    }
    return correlation_from_covariance(covariance_matrix(n, nu, tol));
}

}  // namespace rankalloc
