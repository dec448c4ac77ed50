#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "agora/profiles.hpp"
#include "agora/rng.hpp"

namespace agora {

enum class Truncation { ByCount, ByTime };

// One population jump per birth; after jump_times[i] the population is i+2
// (the root is alive from time 1 and is not a jump).
struct GrowthTrace {
    std::vector<double> jump_times;
    bool depth_limited = false;

    std::size_t births() const { return jump_times.size(); }
    double population_after(std::size_t i) const { return static_cast<double>(i + 2); }
};

// Realized tree T_t: vertices in birth order, root first.
struct BranchingTree {
    ProcessParams params;
    double horizon = 1.0;             // realized T; the tree is exactly T_horizon
    Truncation truncated_by = Truncation::ByCount;
    std::optional<int> depth_limit;   // set when generation pruned below a level
    bool has_locations = true;

    std::vector<int> parent;   // parent[0] = -1
    std::vector<double> tau;   // birth times, tau[0] = 1, strictly increasing
    std::vector<int> depth;    // generation, depth[0] = 0
    std::vector<double> chi;   // row-major locations (empty when !has_locations)
    GrowthTrace trace;

    int size() const { return static_cast<int>(tau.size()); }
    const double* location(int v) const {
        return chi.data() + static_cast<std::size_t>(v) * params.d;
    }
};

struct GenOptions {
    std::int64_t max_vertices = 0;      // required, >= 1
    std::optional<double> max_time;
    std::optional<int> max_depth;       // vertices at this depth spawn no children
    bool with_locations = true;
};

// Next potential birth time of a vertex after tau_current: the log-time
// Poisson process has rate rho, so the gap is tau_current * exp(E/rho)
// with E a unit exponential.
double next_child_time(double tau_current, double rho, RngStream& rng);

// Event-queue simulation: a min-heap over each live vertex's next
// potential birth time, popped in time order; both the parent's and the
// newborn's clocks are re-armed from the birth time (valid by
// memorylessness of the log-time Poisson process).
BranchingTree generate_tree(const ProcessParams& params, const GenOptions& opt);

struct GrowthFit {
    double slope = 0.0;            // mean of per-replica OLS slopes
    double std_error = 0.0;        // standard error of that mean
    std::vector<double> replica_slopes;
    std::vector<double> w_hats;    // n(T) * T^{-rho_hint} per replica
};

// Least-squares slope of log n(t) vs log t over the last `window` fraction
// of each trace in log-time, fitted per replica and averaged.
GrowthFit growth_exponent(const std::vector<GrowthTrace>& traces, double rho_hint,
                          double window = 0.8);

}  // namespace agora
