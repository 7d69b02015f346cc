#pragma once
// Seeded Monte Carlo oracle for the analytic moments and payoffs.
//
// Trials are cut into fixed blocks of kBlockTrials; block b draws from stream b
// of the seed. Blocks may run on any number of threads, and their partial
// statistics are merged in block order, so results are bit-identical for a
// given (trials, seed) regardless of the thread count.
//
// The oracle draws n independent uniforms and sorts them; it never touches the
// beta-function machinery it is meant to check.

#include <cstdint>
#include <span>
#include <vector>

#include "rankalloc/allocator.hpp"
#include "rankalloc/rng.hpp"
#include "rankalloc/types.hpp"

namespace rankalloc {

inline constexpr std::uint64_t kBlockTrials = 1u << 14;

struct SimulationSpec {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 42;
    ModelParams params;

    void validate() const;
};

struct EmpiricalSummary {
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
    double standard_error = 0.0;
    std::uint64_t trials = 0;
};

struct EmpiricalCovariance {
    MomentMatrix covariance;
    std::vector<double> standard_error;  // row-major, same shape as covariance
    std::uint64_t trials = 0;

    double se(std::size_t i, std::size_t j) const { return standard_error[i * covariance.size() + j]; }
};

// Successive sorted n-vectors from one stream.
class SortedUniformStream {
public:
    SortedUniformStream(int n, std::uint64_t seed, std::uint64_t stream = 0);

    std::span<const double> next();

private:
    Xoshiro256 rng_;
    std::vector<double> buffer_;
};

// `count` sorted vectors laid out in the same block/stream order the
// estimators below use.
std::vector<std::vector<double>> sample_sorted_uniforms(int n, std::uint64_t count, std::uint64_t seed);

// threads == 0 selects std::thread::hardware_concurrency().
EmpiricalSummary empirical_moment(RankIndex i, const SimulationSpec& spec, unsigned threads = 0);

EmpiricalCovariance empirical_covariance(const SimulationSpec& spec, unsigned threads = 0);

// Total payoff a * sum_i x_i^nu w_i^(1-nu); Sorted pairs w_i with x_(i).
EmpiricalSummary simulate_payoffs(const WeightVector& w, const SimulationSpec& spec, Pairing pairing,
                                  unsigned threads = 0);

}  // namespace rankalloc
