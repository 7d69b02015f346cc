#include "rankalloc/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <fmt/format.h>

namespace rankalloc {
namespace {

// Welford accumulator with Chan's pairwise merge.
struct RunningMoments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const RunningMoments& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double total = static_cast<double>(count + other.count);
        const double delta = other.mean - mean;
        mean += delta * static_cast<double>(other.count) / total;
        m2 += other.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(other.count) / total;
        count += other.count;
    }

    EmpiricalSummary summary() const {
        EmpiricalSummary s;
        s.trials = count;
        s.mean = mean;
        s.variance = count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
        s.standard_error = std::sqrt(s.variance / static_cast<double>(count));
        return s;
    }
};

std::uint64_t block_count(std::uint64_t trials) { return (trials + kBlockTrials - 1) / kBlockTrials; }

std::uint64_t block_size(std::uint64_t block, std::uint64_t trials) {
    return std::min(kBlockTrials, trials - block * kBlockTrials);
}

unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Evaluates fn(block, size) for every block and returns the results in block order.
template <class BlockFn>
auto run_blocks(std::uint64_t trials, unsigned threads, BlockFn fn) {
    using Result = decltype(fn(std::uint64_t{0}, std::uint64_t{0}));
    const std::uint64_t blocks = block_count(trials);
    std::vector<Result> results(blocks);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t b = next++; b < blocks; b = next++) results[b] = fn(b, block_size(b, trials));
    };
    const unsigned pool = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), blocks));
    if (pool <= 1) {
        worker();
    } else {
        std::vector<std::jthread> crew;
        crew.reserve(pool);
        for (unsigned t = 0; t < pool; ++t) crew.emplace_back(worker);
    }
    return results;
}

// Draws the n uniforms of one trial, optionally sorting them.
void draw(Xoshiro256& rng, std::vector<double>& x, bool sort) {
    for (double& v : x) v = rng.uniform();
    if (sort) std::sort(x.begin(), x.end());
}

}  // namespace

void SimulationSpec::validate() const {
    if (trials < 1) throw DomainError("simulation needs at least one trial");
    params.validate();
}

SortedUniformStream::SortedUniformStream(int n, std::uint64_t seed, std::uint64_t stream)
    : rng_(seed, stream), buffer_(static_cast<std::size_t>(n)) {
    if (n < 1) throw DomainError(fmt::format("n must be >= 1, got {}", n));
}

std::span<const double> SortedUniformStream::next() {
    draw(rng_, buffer_, true);
    return buffer_;
}

std::vector<std::vector<double>> sample_sorted_uniforms(int n, std::uint64_t count, std::uint64_t seed) {
    if (n < 1) throw DomainError(fmt::format("n must be >= 1, got {}", n));
    if (count < 1) throw DomainError("count must be >= 1");
    std::vector<std::vector<double>> out;
    out.reserve(count);
    for (std::uint64_t b = 0; b < block_count(count); ++b) {
        SortedUniformStream stream(n, seed, b);
        for (std::uint64_t t = 0; t < block_size(b, count); ++t) {
            const auto v = stream.next();
            out.emplace_back(v.begin(), v.end());
        }
    }
    return out;
}

EmpiricalSummary empirical_moment(RankIndex i, const SimulationSpec& spec, unsigned threads) {
    spec.validate();
    i.check(spec.params.n);
    const double nu = spec.params.nu;
    const std::size_t rank = i.offset();
    const auto partial = run_blocks(spec.trials, threads, [&](std::uint64_t block, std::uint64_t size) {
        SortedUniformStream stream(spec.params.n, spec.seed, block);
        RunningMoments acc;
        for (std::uint64_t t = 0; t < size; ++t) acc.push(std::pow(stream.next()[rank], nu));
        return acc;
    });
    RunningMoments total;
    for (const auto& p : partial) total.merge(p);
    return total.summary();
}

EmpiricalCovariance empirical_covariance(const SimulationSpec& spec, unsigned threads) {
    spec.validate();
    const int n = spec.params.n;
    const double nu = spec.params.nu;
    const auto size = static_cast<std::size_t>(n);

    // First pass: per-rank means.
    const auto first = run_blocks(spec.trials, threads, [&](std::uint64_t block, std::uint64_t count) {
        SortedUniformStream stream(n, spec.seed, block);
        std::vector<RunningMoments> acc(size);
        for (std::uint64_t t = 0; t < count; ++t) {
            const auto x = stream.next();
            for (std::size_t r = 0; r < size; ++r) acc[r].push(std::pow(x[r], nu));
        }
        return acc;
    });
    std::vector<RunningMoments> rank_moments(size);
    for (const auto& block : first) {
        for (std::size_t r = 0; r < size; ++r) rank_moments[r].merge(block[r]);
    }
    std::vector<double> mean(size);
    for (std::size_t r = 0; r < size; ++r) mean[r] = rank_moments[r].mean;

    // Second pass over the same streams: centred cross products, upper triangle.
    const auto second = run_blocks(spec.trials, threads, [&](std::uint64_t block, std::uint64_t count) {
        SortedUniformStream stream(n, spec.seed, block);
        std::vector<RunningMoments> acc(size * size);
        std::vector<double> centred(size);
        for (std::uint64_t t = 0; t < count; ++t) {
            const auto x = stream.next();
            for (std::size_t r = 0; r < size; ++r) centred[r] = std::pow(x[r], nu) - mean[r];
            for (std::size_t r = 0; r < size; ++r) {
                for (std::size_t c = r; c < size; ++c) acc[r * size + c].push(centred[r] * centred[c]);
            }
        }
        return acc;
    });
    std::vector<RunningMoments> products(size * size);
    for (const auto& block : second) {
        for (std::size_t k = 0; k < size * size; ++k) products[k].merge(block[k]);
    }

    EmpiricalCovariance out{MomentMatrix(size, MatrixKind::Covariance), std::vector<double>(size * size),
                            spec.trials};
    const double trials = static_cast<double>(spec.trials);
    const double bessel = spec.trials > 1 ? trials / (trials - 1.0) : 1.0;
    for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t c = r; c < size; ++c) {
            const EmpiricalSummary s = products[r * size + c].summary();
            out.covariance(r, c) = out.covariance(c, r) = s.mean * bessel;
            out.standard_error[r * size + c] = out.standard_error[c * size + r] = s.standard_error;
        }
    }
    return out;
}

EmpiricalSummary simulate_payoffs(const WeightVector& w, const SimulationSpec& spec, Pairing pairing,
                                  unsigned threads) {
    spec.validate();
    const auto size = static_cast<std::size_t>(spec.params.n);
    if (w.size() != size) throw DomainError(fmt::format("{} weights for n = {}", w.size(), spec.params.n));
    const double nu = spec.params.nu;
    const double a = spec.params.a;

    std::vector<double> factor(size);
    for (std::size_t k = 0; k < size; ++k) factor[k] = w[k] == 0.0 ? 0.0 : std::pow(w[k], 1.0 - nu);

    const bool sort = pairing == Pairing::Sorted;
    const auto partial = run_blocks(spec.trials, threads, [&](std::uint64_t block, std::uint64_t count) {
        Xoshiro256 rng(spec.seed, block);
        std::vector<double> x(size);
        RunningMoments acc;
        for (std::uint64_t t = 0; t < count; ++t) {
            draw(rng, x, sort);
            double payoff = 0.0;
            for (std::size_t k = 0; k < size; ++k) payoff += std::pow(x[k], nu) * factor[k];
            acc.push(a * payoff);
        }
        return acc;
    });
    RunningMoments total;
    for (const auto& p : partial) total.merge(p);
    return total.summary();
}

}  // namespace rankalloc
