#include "rankalloc/riskaverse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "rankalloc/allocator.hpp"
#include "rankalloc/orderstats.hpp"
#include "rankalloc/rng.hpp"

namespace rankalloc {
namespace {

void check_cov(const MomentMatrix& cov, int n) {
    if (cov.kind() != MatrixKind::Covariance) {
        throw DomainError(fmt::format("expected a covariance matrix, got {}", to_string(cov.kind())));
    }
    if (cov.size() != static_cast<std::size_t>(n)) {
        throw DomainError(fmt::format("covariance is {0}x{0} but n = {1}", cov.size(), n));
    }
}

void check_solver_params(const ModelParams& params) {
    params.validate();
    if (!(params.nu > 0.0)) throw DomainError("the risk-averse solver needs nu > 0");
}

double sup_norm_diff(std::span<const double> x, std::span<const double> y) {
    double out = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) out = std::max(out, std::abs(x[k] - y[k]));
    return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

std::vector<double> dirichlet_start(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
    Xoshiro256 rng(seed, stream);
    std::vector<double> w(n);
    for (double& x : w) x = -std::log1p(-rng.uniform());  // Exp(1); uniform() < 1
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    return w;
}

// Spectral projected gradient ascent (Barzilai-Borwein steps, Armijo backtracking).
RestartResult ascend(const SolverObjective& f, std::vector<double> start, const OptimizerConfig& cfg) {
    constexpr double kArmijo = 1e-4;
    constexpr double kStepMin = 1e-12;
    constexpr double kStepMax = 1e12;

    const std::size_t n = f.size();
    RestartResult out;
    out.start = start;

    std::vector<double> w = project_to_simplex(start, cfg.floor);
    std::vector<double> g(n), g_next(n), trial(n), w_next(n), s(n), y(n);
    f.gradient(w, g);
    double fw = f.value(w);
    double step = 1.0;

    auto stationarity = [&] {
        for (std::size_t k = 0; k < n; ++k) trial[k] = w[k] + g[k];
        return sup_norm_diff(project_to_simplex(trial, cfg.floor), w);
    };

    out.stationarity = stationarity();
    int it = 0;
    for (; it < cfg.max_iterations && out.stationarity > cfg.tolerance; ++it) {
        for (std::size_t k = 0; k < n; ++k) trial[k] = w[k] + step * g[k];
        const std::vector<double> target = project_to_simplex(trial, cfg.floor);
        std::vector<double> d(n);
        for (std::size_t k = 0; k < n; ++k) d[k] = target[k] - w[k];
        const double slope = dot(g, d);
        const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(fw));

        double lambda = 1.0;
        double f_next = fw;
        bool accepted = false;
        for (int backtrack = 0; backtrack < 60; ++backtrack, lambda *= 0.5) {
            // Exact arithmetic keeps w + lambda d feasible; the projection only
            // removes rounding that would otherwise let the budget drift.
            for (std::size_t k = 0; k < n; ++k) trial[k] = w[k] + lambda * d[k];
            w_next = project_to_simplex(trial, cfg.floor);
            f_next = f.value(w_next);
            if (f_next >= fw + kArmijo * lambda * slope - slack) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;

        f.gradient(w_next, g_next);
        for (std::size_t k = 0; k < n; ++k) {
            s[k] = w_next[k] - w[k];
            y[k] = g_next[k] - g[k];
        }
        // Ascent on f is descent on -f, whose gradient difference is -y.
        const double curvature = -dot(s, y);
        step = curvature > 0.0 ? std::clamp(dot(s, s) / curvature, kStepMin, kStepMax) : kStepMax;

        w.swap(w_next);
        g.swap(g_next);
        fw = f_next;
        out.stationarity = stationarity();
    }

    out.iterations = it;
    out.converged = out.stationarity <= cfg.tolerance;
    out.objective = fw;
    out.weights = std::move(w);
    return out;
}

// Higher objective wins; within rounding the lexicographically smaller weights win.
bool better(const RestartResult& lhs, const RestartResult& rhs) {
    const double scale = std::max({1.0, std::abs(lhs.objective), std::abs(rhs.objective)});
    if (std::abs(lhs.objective - rhs.objective) > 1e-12 * scale) return lhs.objective > rhs.objective;
    return std::lexicographical_compare(lhs.weights.begin(), lhs.weights.end(), rhs.weights.begin(),
                                        rhs.weights.end());
}

WeightVector normalized(std::vector<double> w) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    return WeightVector(std::move(w));
}

OptimizationOutcome solve(const ModelParams& params, const OptimizerConfig& cfg, ObjectiveKind kind) {
    check_solver_params(params);
    cfg.validate(params.n);
    const Method method = kind == ObjectiveKind::MeanVariance ? Method::MeanVariance : Method::MinVariance;
    const MomentMatrix cov = covariance_matrix(params.n, params.nu);

    OptimizationOutcome outcome;
    if (params.n == 1) {
        outcome.report = make_report(WeightVector({1.0}), params, cov, method);
        outcome.converged = true;
        outcome.starts_agreeing = 1;
        return outcome;
    }

    const auto n = static_cast<std::size_t>(params.n);
    std::vector<std::vector<double>> starts;
    starts.push_back(ewp_weights(params.n).values());
    if (cfg.restarts > 1) starts.push_back(swp_weights(params.n, params.nu).values());
    for (int r = 2; r < cfg.restarts; ++r) starts.push_back(dirichlet_start(n, cfg.seed, static_cast<std::uint64_t>(r)));

    const SolverObjective objective(params, cov, kind);
    std::vector<RestartResult> results(starts.size());
    if (cfg.parallel) {
        std::vector<std::future<RestartResult>> pending;
        for (const auto& s : starts) pending.push_back(std::async(std::launch::async, ascend, std::cref(objective), s, cfg));
        for (std::size_t k = 0; k < pending.size(); ++k) results[k] = pending[k].get();
    } else {
        for (std::size_t k = 0; k < starts.size(); ++k) results[k] = ascend(objective, starts[k], cfg);
    }

    const auto best = std::min_element(results.begin(), results.end(), better);
    outcome.converged = best->converged;
    outcome.iterations = best->iterations;
    outcome.stationarity = best->stationarity;
    outcome.starts_agreeing = static_cast<int>(std::count_if(results.begin(), results.end(), [&](const auto& r) {
        return sup_norm_diff(r.weights, best->weights) <= 1e-6;
    }));
    outcome.report = make_report(normalized(best->weights), params, cov, method);
    outcome.restarts = std::move(results);
    return outcome;
}

}  // namespace

void OptimizerConfig::validate(int n) const {
    if (!(tolerance > 0.0)) throw DomainError("optimizer tolerance must be positive");
    if (max_iterations < 1) throw DomainError("optimizer needs at least one iteration");
    if (restarts < 1) throw DomainError("optimizer needs at least one start");
    if (!(floor >= 0.0 && floor * n < 1.0)) {
        throw DomainError(fmt::format("weight floor {} must satisfy 0 <= floor < 1/n", floor));
    }
}

double variance_of_output(const WeightVector& w, const ModelParams& params, const MomentMatrix& cov) {
    params.validate();
    check_cov(cov, params.n);
    if (w.size() != cov.size()) throw DomainError(fmt::format("{} weights for n = {}", w.size(), params.n));
    std::vector<double> z(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) z[k] = capital_factor(w[k], params.nu);
    double acc = 0.0;
    for (std::size_t r = 0; r < z.size(); ++r) {
        for (std::size_t c = 0; c < z.size(); ++c) acc += cov(r, c) * z[r] * z[c];
    }
    // Only rounding can push a PSD quadratic form below zero.
    return std::max(0.0, params.a * params.a * acc);
}

double utility(const WeightVector& w, const ModelParams& params, const MomentMatrix& cov) {
    return expected_output(w, params, Pairing::Sorted) - 0.5 * params.b * variance_of_output(w, params, cov);
}

double utility(const WeightVector& w, const ModelParams& params) {
    params.validate();
    return utility(w, params, covariance_matrix(params.n, params.nu));
}

AllocationReport make_report(const WeightVector& w, const ModelParams& params, const MomentMatrix& cov,
                             Method method) {
    AllocationReport report{w, 0.0, 0.0, 0.0, method, params};
    report.expected_output = expected_output(w, params, Pairing::Sorted);
    report.variance = variance_of_output(w, params, cov);
    report.utility = report.expected_output - 0.5 * params.b * report.variance;
    return report;
}

SolverObjective::SolverObjective(const ModelParams& params, const MomentMatrix& cov, ObjectiveKind kind)
    : nu_(params.nu), limit_(params.nu == 1.0) {
    check_solver_params(params);
    check_cov(cov, params.n);
    const auto n = static_cast<std::size_t>(params.n);
    const double a = params.a;

    mean_coef_.assign(n, 0.0);
    double penalty = 0.5 * a * a;
    if (kind == ObjectiveKind::MeanVariance) {
        const ProbabilityVector p = p_vector(params.n, nu_);
        for (std::size_t k = 0; k < n; ++k) mean_coef_[k] = a * params.n / (1.0 + nu_) * p[k];
        penalty *= params.b;
    }
    cov_.resize(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) cov_[r * n + c] = penalty * cov(r, c);
    }
    log_coef_.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < n; ++c) row += cov_[r * n + c];
        log_coef_[r] = mean_coef_[r] - 2.0 * row;
    }
}

double SolverObjective::value(std::span<const double> w) const {
    const std::size_t n = size();
    if (limit_) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += log_coef_[k] * std::log(w[k]);
        return acc;
    }
    std::vector<double> z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = std::pow(w[k], 1.0 - nu_);
    double acc = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < n; ++c) row += cov_[r * n + c] * z[c];
        acc += z[r] * (mean_coef_[r] - row);
    }
    return acc;
}

void SolverObjective::gradient(std::span<const double> w, std::span<double> grad) const {
    const std::size_t n = size();
    if (limit_) {
        for (std::size_t k = 0; k < n; ++k) grad[k] = log_coef_[k] / w[k];
        return;
    }
    std::vector<double> z(n);
    for (std::size_t k = 0; k < n; ++k) z[k] = std::pow(w[k], 1.0 - nu_);
    for (std::size_t r = 0; r < n; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < n; ++c) row += cov_[r * n + c] * z[c];
        grad[r] = (1.0 - nu_) * z[r] / w[r] * (mean_coef_[r] - 2.0 * row);
    }
}

std::vector<double> project_to_simplex(std::span<const double> v, double floor) {
    const std::size_t n = v.size();
    const double budget = 1.0 - floor * static_cast<double>(n);
    // Project v - floor onto {y >= 0, sum y = budget}, then shift back.
    std::vector<double> sorted(n);
    for (std::size_t k = 0; k < n; ++k) sorted[k] = v[k] - floor;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double running = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        running += sorted[k];
        const double candidate = (running - budget) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0.0) theta = candidate;
    }
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = floor + std::max(0.0, v[k] - floor - theta);
    return out;
}

OptimizationOutcome optimize_mean_variance(const ModelParams& params, const OptimizerConfig& cfg) {
    return solve(params, cfg, ObjectiveKind::MeanVariance);
}

OptimizationOutcome minimum_variance_weights(const ModelParams& params, const OptimizerConfig& cfg) {
    return solve(params, cfg, ObjectiveKind::MinVariance);
}

}  // namespace rankalloc
