#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "agora/branching.hpp"

namespace agora {

// --- per-tree level statistics -------------------------------------------
//
// All of these require a time-truncated tree (the realized tree is then
// exactly T_horizon, so every level inside the depth limit is complete);
// vertex-count truncation biases level sums and is rejected.

// Sum over level-n vertices of tau^{-lambda}. Across replicas the mean
// converges to (rho/lambda)^n.
double level_weight_sum(const BranchingTree& tree, int level, double lambda);

// W_1..W_n_max with W_k = sum over level-k vertices of tau^{-rho}.
std::vector<double> martingale_trace(const BranchingTree& tree, int n_max);

// #{v : |v| = level, rho*log tau(v) <= x}; mean over replicas -> x^n / n!.
// Requires x <= rho * log(horizon).
long long level_count_below(const BranchingTree& tree, int level, double x);

// Approximate limit-uniform-measure weights at a level: for each level-n
// vertex v, weight(v) = tau(v)^{-rho} * W_m(v) computed with m levels of
// lookahead, i.e. the sum of tau(z)^{-rho} over descendants z at level n+m.
// Summing the weights over the level reproduces W_{n+m} exactly (up to
// floating-point regrouping).
std::vector<std::pair<int, double>> limit_uniform_weights(const BranchingTree& tree,
                                                          int level, int lookahead);

// --- Monte Carlo identity checks -------------------------------------------

struct CheckResult {
    std::string identity;
    std::string detail;
    double theoretical = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    std::size_t replicas = 0;
    bool pass = false;
};

struct DiagnosticsConfig {
    double rho = 1.0;
    int replicas = 5000;
    int levels = 3;
    std::vector<double> lambdas;  // empty -> {rho, 2*rho}
    std::vector<double> xs;       // empty -> {0.5, 1.0}
    // Horizon is chosen as rho*log T = horizon_z. At z = 9 the level-sum
    // truncation bias for lambda >= rho is below half a standard error at
    // 5000 replicas through level 3.
    double horizon_z = 9.0;
    std::uint64_t seed = 1;
    int threads = 0;
};

// E sum tau^{-lambda} at levels 1..levels == (rho/lambda)^n, within 3 SE.
std::vector<CheckResult> check_moment_identity(const DiagnosticsConfig& cfg);

// mean W_n == 1 and mean W_n^2 == 2 - 2^{-n} within 3 SE, plus the exact
// per-tree telescoping identity at 1e-10.
std::vector<CheckResult> check_martingale(const DiagnosticsConfig& cfg);

// mean #{|v|=n, rho log tau <= x} == x^n/n! within 3 SE.
std::vector<CheckResult> check_level_counts(const DiagnosticsConfig& cfg);

struct GrowthCheckConfig {
    double rho = 1.0;
    int replicas = 50;
    std::int64_t vertices = 10000;
    double tolerance_frac = 0.10;
    std::uint64_t seed = 1;
    int threads = 0;
};

// Pooled log n(t) vs log t slope within tolerance_frac of rho.
CheckResult check_growth(const GrowthCheckConfig& cfg);

}  // namespace agora
