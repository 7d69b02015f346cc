#pragma once
// Closed-form allocations for a risk-neutral investor.
//
// Output of alternative i is a * x_i^nu * w_i^(1-nu). Without a ranking the
// x_i are exchangeable and the optimum is the equally weighted portfolio (EWP);
// with an ordinal ranking the x_(i) are order statistics and the optimum is
// the sorted weighted portfolio (SWP), w_i proportional to p_i(nu)^(1/nu).

#include "rankalloc/types.hpp"

namespace rankalloc {

enum class Pairing {
    Sorted,    // weight i is paired with the i-th smallest draw
    Unsorted,  // weights are paired with exchangeable draws
};

// w^(1-nu), with a zero weight contributing nothing even at nu = 1.
double capital_factor(double weight, double nu);

WeightVector ewp_weights(int n);

// For 0 < nu <= 1: p_i^(1/nu) / sum_j p_j^(1/nu).
// For nu = 0 the limit exp(psi(i)) / sum_j exp(psi(j)), psi the digamma function.
WeightVector swp_weights(int n, double nu);

// Two-alternative SWP in closed form; nu = 0 is taken as the limit (1+nu)^(1/nu) -> e.
WeightVector two_asset_weights(double nu);

// 2i / (n(n+1)): the nu = 1 SWP, usable when nu is unknown.
WeightVector rule_of_thumb_weights(int n);

// Sorted:   a n/(1+nu) sum_i p_i(nu) w_i^(1-nu)
// Unsorted: a/(1+nu) sum_i w_i^(1-nu)
double expected_output(const WeightVector& w, const ModelParams& params, Pairing pairing);

// a n^nu / (1+nu)
double max_output_case1(const ModelParams& params);

// a n/(1+nu) ||p(nu)||_(1/nu); the norm becomes the max-norm at nu = 0.
double max_output_case2(const ModelParams& params);

// ln(n^(1-nu) ||p(nu)||_(1/nu)), which the Hoelder inequality bounds below by 0.
double log_holder_ratio(int n, double nu);

// B2 - B1 >= 0, with equality at nu in {0, 1}. Requires n > 1.
double dominance_gap(const ModelParams& params);

}  // namespace rankalloc
