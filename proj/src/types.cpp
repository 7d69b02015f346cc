#include "rankalloc/types.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include <fmt/format.h>

namespace rankalloc {

void RankIndex::check(int n) const {
    if (value_ < 1 || value_ > n) {
        throw DomainError(fmt::format("rank {} outside [1, {}]", value_, n));
    }
}

void ModelParams::validate() const {
    if (n < 1) throw DomainError(fmt::format("n must be >= 1, got {}", n));
    if (!(nu >= 0.0 && nu <= 1.0)) throw DomainError(fmt::format("nu must lie in [0, 1], got {}", nu));
    if (!(a > 0.0)) throw DomainError(fmt::format("a must be > 0, got {}", a));
    if (!(b >= 0.0)) throw DomainError(fmt::format("b must be >= 0, got {}", b));
    if (!(c0 > 0.0)) throw DomainError(fmt::format("c0 must be > 0, got {}", c0));
}

const char* to_string(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::RawJoint: return "raw-joint";
        case MatrixKind::Covariance: return "covariance";
        case MatrixKind::Correlation: return "correlation";
    }
    return "?";
}

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw DomainError("weight vector is empty");
    for (double x : w_) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw DomainError(fmt::format("weight {} is not a finite nonnegative number", x));
        }
    }
    const double sum = std::accumulate(w_.begin(), w_.end(), 0.0);
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw DomainError(fmt::format("weights sum to {:.17g}, expected 1", sum));
    }
}

const char* to_string(Method method) {
    switch (method) {
        case Method::EWP: return "EWP";
        case Method::SWP: return "SWP";
        case Method::RuleOfThumb: return "rule-of-thumb";
        case Method::MeanVariance: return "mean-variance";
        case Method::MinVariance: return "min-variance";
    }
    return "?";
}

}  // namespace rankalloc
