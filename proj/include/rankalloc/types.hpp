#pragma once
// Shared domain types for the rank-based allocation engine.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankalloc {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An infinite series did not settle within its term budget.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double partial_sum, std::size_t terms)
        : std::runtime_error(what), partial_sum_(partial_sum), terms_(terms) {}

    double partial_sum() const noexcept { return partial_sum_; }
    std::size_t terms() const noexcept { return terms_; }

private:
    double partial_sum_;
    std::size_t terms_;
};

// 1-based rank of an alternative in the ascending ordering x_(1) <= ... <= x_(n).
class RankIndex {
public:
    constexpr explicit RankIndex(int value) : value_(value) {}
    constexpr int value() const noexcept { return value_; }
    constexpr std::size_t offset() const noexcept { return static_cast<std::size_t>(value_ - 1); }

    // Throws DomainError unless 1 <= i <= n.
    void check(int n) const;

private:
    int value_;
};

// Problem instance. `a` already absorbs the budget scaling a = a' * c0^(1 - nu);
// c0 is carried for reporting only.
struct ModelParams {
    int n = 1;
    double nu = 0.5;
    double a = 1.0;
    double b = 0.0;
    double c0 = 1.0;

    void validate() const;
};

// Discrete distribution over ranks, entry i-1 holds p_i(nu).
struct ProbabilityVector {
    std::vector<double> p;

    std::size_t size() const noexcept { return p.size(); }
    double operator[](std::size_t k) const { return p[k]; }
};

enum class MatrixKind { RawJoint, Covariance, Correlation };

const char* to_string(MatrixKind kind);

// Dense symmetric n x n matrix of moments of powered order statistics.
class MomentMatrix {
public:
    MomentMatrix(std::size_t n, MatrixKind kind) : n_(n), kind_(kind), m_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    MatrixKind kind() const noexcept { return kind_; }

    double operator()(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return m_[i * n_ + j]; }

    const std::vector<double>& data() const noexcept { return m_; }

private:
    std::size_t n_;
    MatrixKind kind_;
    std::vector<double> m_;
};

// Long-only allocation on the unit simplex.
class WeightVector {
public:
    static constexpr double kSumTolerance = 1e-10;

    // Validates: nonnegative entries, sum 1 within kSumTolerance, non-empty.
    explicit WeightVector(std::vector<double> w);

    std::size_t size() const noexcept { return w_.size(); }
    double operator[](std::size_t k) const { return w_[k]; }
    const std::vector<double>& values() const noexcept { return w_; }

    auto begin() const noexcept { return w_.begin(); }
    auto end() const noexcept { return w_.end(); }

private:
    std::vector<double> w_;
};

enum class Method { EWP, SWP, RuleOfThumb, MeanVariance, MinVariance };

const char* to_string(Method method);

struct AllocationReport {
    WeightVector weights{std::vector<double>{1.0}};
    double expected_output = 0.0;
    double variance = 0.0;
    double utility = 0.0;
    Method method = Method::EWP;
    ModelParams params;
};

}  // namespace rankalloc
