#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace agora {

enum class DimMethod { BoxCount, CorrelationSum };

const char* dim_method_name(DimMethod m);

// Log-log regression over a scale sweep. eps is strictly decreasing; the
// fit window [win_lo, win_hi) indexes into it.
struct DimFit {
    DimMethod method = DimMethod::BoxCount;
    std::vector<double> eps;
    std::vector<double> stat;   // N(eps) or C(eps)
    double slope = 0.0;         // dimension estimate
    double intercept = 0.0;
    double slope_stderr = 0.0;
    int win_lo = 0;
    int win_hi = 0;
    std::vector<double> residuals;  // within the window, fitted scales only
};

// Occupied cells of the axis-aligned grid of side eps anchored at the
// coordinate-wise minimum of the point set (or at `anchor` when given).
long long box_count(const std::vector<double>& points, int d, double eps,
                    const double* anchor = nullptr);

// Default scale sweep: `steps` logarithmically spaced values from
// (bounding-box diagonal)/4 down to the 1st-percentile nearest-neighbor
// distance. Strictly decreasing.
std::vector<double> default_eps_sweep(const std::vector<double>& points, int d,
                                      int steps = 12);

// OLS of log(stat) against log(1/eps) (box counting) or log(eps)
// (correlation sum). The default window drops the largest and smallest 20%
// of scales; at least 4 usable scales must remain. Scales with
// non-positive statistics are skipped.
DimFit fit_dimension(DimMethod method, const std::vector<double>& eps,
                     const std::vector<double>& stats,
                     std::optional<std::pair<int, int>> window = std::nullopt);

struct PairSampleConfig {
    std::size_t subsample_cap = 20000;     // pairs computed on at most this many points
    std::uint64_t subsample_seed = 0x5eed;
};

struct CorrSums {
    std::vector<double> c;        // per eps: ordered-pair fraction, zero-distance pairs excluded
    std::size_t n_used = 0;       // points entering the pair counts
    bool subsampled = false;
    std::uint64_t subsample_seed = 0;
    long long zero_pairs = 0;     // unordered coincident pairs encountered
};

// C(eps) = #{ordered pairs i != j with 0 < |p_i-p_j| <= eps} / (n(n-1)).
CorrSums correlation_sums(const std::vector<double>& points, int d,
                          const std::vector<double>& eps,
                          const PairSampleConfig& cfg = {});
double correlation_sum(const std::vector<double>& points, int d, double eps,
                       const PairSampleConfig& cfg = {});

// Mean of |p_i - p_j|^{-a} over distinct ordered pairs with nonzero
// distance (subsampled like the correlation sum). Diagnostic: stable in n
// for a below the set's dimension, growing in n above it.
double energy_estimate(const std::vector<double>& points, int d, double a,
                       const PairSampleConfig& cfg = {});

// End-to-end sweep + fit on a point set.
DimFit estimate_dimension(DimMethod method, const std::vector<double>& points, int d,
                          const std::vector<double>& eps,
                          const PairSampleConfig& cfg = {});

}  // namespace agora
