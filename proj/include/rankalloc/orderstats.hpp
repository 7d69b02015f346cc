#pragma once
// Moments of powers of uniform order statistics.
//
// For n i.i.d. U(0,1) draws sorted ascending, x_(i) ~ Beta(i, n - i + 1).
// Everything here is a pure function of its arguments.

#include <cstddef>

#include "rankalloc/types.hpp"

namespace rankalloc {

// Relative increment threshold for the joint-moment series. Terms decay only
// polynomially, so the truncation error is a few thousand times this value;
// 1e-13 keeps every pair with n <= 30, nu >= 0.05 inside the term cap.
inline constexpr double kDefaultSeriesTolerance = 1e-13;
// Consecutive sub-threshold terms required before the series is declared settled.
inline constexpr int kSeriesQuietRun = 5;
inline constexpr std::size_t kSeriesTermCap = 100000;

// ln B(alpha, beta). Throws DomainError unless both arguments are positive.
double log_beta(double alpha, double beta);

// Density of x_(i) at x: x^(i-1) (1-x)^(n-i) / B(i, n-i+1).
double order_statistic_pdf(double x, RankIndex i, int n);

// E[x_(i)^nu] = B(i+nu, n-i+1) / B(i, n-i+1), nu > -1.
double moment_of_order_statistic(RankIndex i, int n, double nu);

// p_i(nu) = (1+nu)/n * E[x_(i)^nu]. Sums to one; increasing in i for nu > 0.
ProbabilityVector p_vector(int n, double nu);

struct SeriesEvaluation {
    double value = 0.0;
    std::size_t terms = 0;
};

/// E[x_(i)^nu x_(j)^nu] for 0 < nu <= 1.
///
/// The diagonal uses E[x_(i)^(2 nu)]. Off the diagonal the binomial expansion
/// of v^nu = (1 - w)^nu under the joint density of (x_(i), x_(j)) yields
///
///   E[x_(i)^nu] * sum_k t_k,   t_0 = 1,
///   t_k / t_(k-1) = -(nu - k + 1)/k * (n + k - j)/(nu + n + k),   i < j,
///
/// summed until kSeriesQuietRun consecutive terms fall below tol * |sum|.
/// At nu = 1 the binomial coefficients vanish for k >= 2 and the sum is exact.
/// Throws ConvergenceError when kSeriesTermCap terms are exhausted.
SeriesEvaluation joint_moment_series(RankIndex i, RankIndex j, int n, double nu,
                                     double tol = kDefaultSeriesTolerance);

double joint_moment(RankIndex i, RankIndex j, int n, double nu,
                    double tol = kDefaultSeriesTolerance);

// Matrix M of raw joint moments.
MomentMatrix joint_moment_matrix(int n, double nu, double tol = kDefaultSeriesTolerance);

// V_ij = M_ij - E[x_(i)^nu] E[x_(j)^nu]. At nu = 0 every x^0 is the constant 1
// and V is identically zero.
MomentMatrix covariance_matrix(int n, double nu, double tol = kDefaultSeriesTolerance);

// rho_ij = V_ij / sqrt(V_ii V_jj). Undefined at nu = 0 (DomainError).
MomentMatrix correlation_matrix(int n, double nu, double tol = kDefaultSeriesTolerance);

// Normalizes an existing covariance matrix.
MomentMatrix correlation_from_covariance(const MomentMatrix& cov);

}  // namespace rankalloc
