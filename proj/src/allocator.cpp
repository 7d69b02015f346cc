#include "rankalloc/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/digamma.hpp>
#include <fmt/format.h>

#include "rankalloc/orderstats.hpp"

namespace rankalloc {
namespace {

void check_n(int n) {
    if (n < 1) throw DomainError(fmt::format("n must be >= 1, got {}", n));
}

void check_nu(double nu) {
    if (!(nu >= 0.0 && nu <= 1.0)) throw DomainError(fmt::format("nu must lie in [0, 1], got {}", nu));
}

double log_sum_exp(const std::vector<double>& x) {
    const double top = *std::max_element(x.begin(), x.end());
    double acc = 0.0;
    for (double v : x) acc += std::exp(v - top);
    return top + std::log(acc);
}

// Normalizes by an explicit division: for small nu the logits log(p)/nu reach
// ~1e6 in magnitude, and exp(v - logsumexp) would miss the unit sum by ~1e-10.
WeightVector softmax(const std::vector<double>& logits) {
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> w(logits.size());
    std::transform(logits.begin(), logits.end(), w.begin(), [top](double v) { return std::exp(v - top); });
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    return WeightVector(std::move(w));
}

std::vector<double> log_p(int n, double nu) {
    const ProbabilityVector p = p_vector(n, nu);
    std::vector<double> out(p.size());
    std::transform(p.p.begin(), p.p.end(), out.begin(), [](double v) { return std::log(v); });
    return out;
}

}  // namespace

double capital_factor(double weight, double nu) {
    if (weight == 0.0) return 0.0;
    return std::pow(weight, 1.0 - nu);
}

WeightVector ewp_weights(int n) {
    check_n(n);
    return WeightVector(std::vector<double>(static_cast<std::size_t>(n), 1.0 / n));
}

WeightVector swp_weights(int n, double nu) {
    check_n(n);
    check_nu(nu);
    std::vector<double> logits(static_cast<std::size_t>(n));
    if (nu == 0.0) {
        for (int i = 1; i <= n; ++i) logits[static_cast<std::size_t>(i - 1)] = boost::math::digamma(static_cast<double>(i));
    } else {
        logits = log_p(n, nu);
        for (double& v : logits) v /= nu;
    }
    return softmax(logits);
}

WeightVector two_asset_weights(double nu) {
    check_nu(nu);
    const double growth = nu == 0.0 ? std::numbers::e : std::pow(1.0 + nu, 1.0 / nu);
    return WeightVector({1.0 / (1.0 + growth), 1.0 / (1.0 + 1.0 / growth)});
}

WeightVector rule_of_thumb_weights(int n) {
    check_n(n);
    std::vector<double> w(static_cast<std::size_t>(n));
    const double denom = static_cast<double>(n) * (n + 1);
    for (int i = 1; i <= n; ++i) w[static_cast<std::size_t>(i - 1)] = 2.0 * i / denom;
    return WeightVector(std::move(w));
}

double expected_output(const WeightVector& w, const ModelParams& params, Pairing pairing) {
    params.validate();
    if (w.size() != static_cast<std::size_t>(params.n)) {
        throw DomainError(fmt::format("{} weights for n = {}", w.size(), params.n));
    }
    const double nu = params.nu;
    if (pairing == Pairing::Unsorted) {
        double acc = 0.0;
        for (double x : w) acc += capital_factor(x, nu);
        return params.a / (1.0 + nu) * acc;
    }
    const ProbabilityVector p = p_vector(params.n, nu);
    double acc = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) acc += p[k] * capital_factor(w[k], nu);
    return params.a * params.n / (1.0 + nu) * acc;
}

double max_output_case1(const ModelParams& params) {
    params.validate();
    return params.a * std::pow(static_cast<double>(params.n), params.nu) / (1.0 + params.nu);
}

double log_holder_ratio(int n, double nu) {
    check_n(n);
    check_nu(nu);
    const double log_n = std::log(static_cast<double>(n));
    // p_i(0) = 1/n for every i, so the max-norm limit gives n * (1/n) = 1.
    if (nu == 0.0) return 0.0;
    std::vector<double> scaled = log_p(n, nu);
    for (double& v : scaled) v /= nu;
    return (1.0 - nu) * log_n + nu * log_sum_exp(scaled);
}

double max_output_case2(const ModelParams& params) {
    params.validate();
    return max_output_case1(params) * std::exp(log_holder_ratio(params.n, params.nu));
}

double dominance_gap(const ModelParams& params) {
    params.validate();
    if (params.n < 2) throw DomainError("dominance gap needs at least two alternatives");
    return max_output_case1(params) * std::expm1(log_holder_ratio(params.n, params.nu));
}

}  // namespace rankalloc
