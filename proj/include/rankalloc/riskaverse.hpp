#pragma once
// Mean-variance allocation for a risk-averse investor.
//
// Maximizes U(w) = E[c1] - b/2 Var[c1] over {w : sum w = 1, w_i >= floor} with
// a multi-start spectral projected-gradient ascent. No closed form exists for
// b > 0 and the variance term can make U non-concave, so the result is the
// best local maximum over the starts.

#include <cstdint>
#include <span>
#include <vector>

#include "rankalloc/types.hpp"

namespace rankalloc {

struct OptimizerConfig {
    double tolerance = 1e-10;  // sup-norm of the projected-gradient step
    int max_iterations = 20000;
    int restarts = 8;  // EWP, SWP, then Dirichlet(1) draws
    double floor = 1e-9;
    std::uint64_t seed = 0x5eed;  // Dirichlet starts
    bool parallel = false;

    void validate(int n) const;
};

struct RestartResult {
    std::vector<double> start;
    std::vector<double> weights;
    double objective = 0.0;
    bool converged = false;
    int iterations = 0;
    double stationarity = 0.0;
};

struct OptimizationOutcome {
    AllocationReport report;
    bool converged = false;
    int iterations = 0;
    double stationarity = 0.0;
    int starts_agreeing = 0;
    std::vector<RestartResult> restarts;
};

// a^2 sum_ij V_ij w_i^(1-nu) w_j^(1-nu); V must be the covariance matrix for (n, nu).
double variance_of_output(const WeightVector& w, const ModelParams& params, const MomentMatrix& cov);

// E[c1] (sorted pairing) - b/2 Var[c1].
double utility(const WeightVector& w, const ModelParams& params, const MomentMatrix& cov);
double utility(const WeightVector& w, const ModelParams& params);

AllocationReport make_report(const WeightVector& w, const ModelParams& params, const MomentMatrix& cov,
                             Method method);

enum class ObjectiveKind { MeanVariance, MinVariance };

// The smooth function the solver ascends, defined for strictly positive weights.
//
// For nu < 1 it is U(w) itself (MinVariance: -a^2/2 Var). At nu = 1 every
// positive weight has w^0 = 1 and U is constant, so the solver ascends the
// leading term of U in (1 - nu) instead, sum_i c_i ln w_i with
// c_i = a n/2 p_i(1) - b a^2 (V 1)_i; its maximizer is the limit of the
// nu -> 1 maximizers.
class SolverObjective {
public:
    SolverObjective(const ModelParams& params, const MomentMatrix& cov, ObjectiveKind kind);

    double value(std::span<const double> w) const;
    void gradient(std::span<const double> w, std::span<double> grad) const;

    std::size_t size() const noexcept { return mean_coef_.size(); }

private:
    double nu_;
    bool limit_;
    std::vector<double> mean_coef_;  // a n/(1+nu) p_i, zero for MinVariance
    std::vector<double> cov_;        // (penalty) * V, row-major
    std::vector<double> log_coef_;   // c_i, used at nu = 1
};

OptimizationOutcome optimize_mean_variance(const ModelParams& params, const OptimizerConfig& cfg = {});
OptimizationOutcome minimum_variance_weights(const ModelParams& params, const OptimizerConfig& cfg = {});

// Euclidean projection onto {w : sum w = 1, w_i >= floor}.
std::vector<double> project_to_simplex(std::span<const double> v, double floor);

}  // namespace rankalloc
