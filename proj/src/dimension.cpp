#include "agora/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "agora/errors.hpp"
#include "agora/kernels.hpp"
#include "agora/rng.hpp"
#include "agora/spatial_index.hpp"
#include "agora/stats.hpp"

namespace agora {
namespace {

std::size_t point_count(const std::vector<double>& points, int d) {
    if (d < 1) throw ValidationError("dimension: d must be >= 1");
    if (points.empty() || points.size() % static_cast<std::size_t>(d) != 0)
        throw ValidationError("dimension: flat point array not a multiple of d");
    return points.size() / static_cast<std::size_t>(d);
}

// Subsample without replacement (partial Fisher-Yates); identity when the
// cap is not exceeded.
std::vector<std::size_t> pair_sample_indices(std::size_t n, const PairSampleConfig& cfg,
                                             bool* subsampled) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    *subsampled = cfg.subsample_cap > 0 && n > cfg.subsample_cap;
    if (!*subsampled) return idx;
    RngStream rng(cfg.subsample_seed);
    for (std::size_t i = 0; i < cfg.subsample_cap; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.u01() * static_cast<double>(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(cfg.subsample_cap);
    std::sort(idx.begin(), idx.end());
    return idx;
}

// Column-major copy (dim stride = count) so the pair kernels can stream it.
std::vector<double> to_columns(const std::vector<double>& points, int d,
                               const std::vector<std::size_t>& idx) {
    std::vector<double> cols(idx.size() * static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const double* p = points.data() + idx[i] * static_cast<std::size_t>(d);
        for (int k = 0; k < d; ++k) {
            cols[static_cast<std::size_t>(k) * idx.size() + i] = p[k];
        }
    }
    return cols;
}

}  // namespace

const char* dim_method_name(DimMethod m) {
    return m == DimMethod::BoxCount ? "boxcount" : "corrsum";
}

long long box_count(const std::vector<double>& points, int d, double eps,
                    const double* anchor) {
    const std::size_t n = point_count(points, d);
    if (!(eps > 0.0)) throw ValidationError("box_count: eps must be > 0");

    std::vector<double> mins(static_cast<std::size_t>(d));
    if (anchor != nullptr) {
        mins.assign(anchor, anchor + d);
    } else {
        mins.assign(points.begin(), points.begin() + d);
        for (std::size_t i = 1; i < n; ++i) {
            const double* p = points.data() + i * static_cast<std::size_t>(d);
            for (int k = 0; k < d; ++k) mins[static_cast<std::size_t>(k)] = std::min(mins[static_cast<std::size_t>(k)], p[k]);
        }
    }

    const auto cell_of = [&](const double* p, int k) {
        return static_cast<long long>(std::floor((p[k] - mins[static_cast<std::size_t>(k)]) / eps));
    };

    if (d <= 3) {
        // pack up to 3 cell coordinates into one key (21 bits each)
        constexpr long long kBits = 21;
        constexpr long long kLimit = 1LL << (kBits - 1);
        std::vector<std::uint64_t> keys;
        keys.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double* p = points.data() + i * static_cast<std::size_t>(d);
            std::uint64_t key = 0;
            for (int k = 0; k < d; ++k) {
                const long long c = cell_of(p, k);
                if (c < -kLimit || c >= kLimit)
                    throw ValidationError("box_count: eps too small for the point spread");
                key = (key << kBits) | static_cast<std::uint64_t>(c + kLimit);
            }
            keys.push_back(key);
        }
        std::sort(keys.begin(), keys.end());
        return static_cast<long long>(std::unique(keys.begin(), keys.end()) - keys.begin());
    }
    std::set<std::vector<long long>> cells;
    std::vector<long long> cell(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = points.data() + i * static_cast<std::size_t>(d);
        for (int k = 0; k < d; ++k) cell[static_cast<std::size_t>(k)] = cell_of(p, k);
        cells.insert(cell);
    }
    return static_cast<long long>(cells.size());
}

std::vector<double> default_eps_sweep(const std::vector<double>& points, int d,
                                      int steps) {
    const std::size_t n = point_count(points, d);
    if (n < 2) throw ValidationError("default_eps_sweep: need >= 2 points");
    if (steps < 2) throw ValidationError("default_eps_sweep: need >= 2 steps");

    std::vector<double> lo(points.begin(), points.begin() + d);
    std::vector<double> hi = lo;
    for (std::size_t i = 1; i < n; ++i) {
        const double* p = points.data() + i * static_cast<std::size_t>(d);
        for (int k = 0; k < d; ++k) {
            lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)], p[k]);
            hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], p[k]);
        }
    }
    double diag2 = 0.0;
    for (int k = 0; k < d; ++k) {
        const double e = hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)];
        diag2 += e * e;
    }
    const double diameter = std::sqrt(diag2);
    if (!(diameter > 0.0))
        throw ValidationError("default_eps_sweep: all points coincide");

    PointIndex index(d, points);
    std::vector<double> nn(n);
    for (std::size_t i = 0; i < n; ++i) {
        nn[i] = index.nearest_excluding(points.data() + i * static_cast<std::size_t>(d),
                                        static_cast<int>(i))
                    .second;
    }
    std::sort(nn.begin(), nn.end());
    double eps_min = nn[n / 100];
    const double eps_max = diameter / 4.0;
    if (!(eps_min > 0.0)) {
        // coincident near-duplicates; fall back to the smallest nonzero gap
        auto it = std::upper_bound(nn.begin(), nn.end(), 0.0);
        eps_min = (it != nn.end()) ? *it : eps_max / 256.0;
    }
    if (eps_min >= eps_max) eps_min = eps_max / 256.0;

    std::vector<double> eps(static_cast<std::size_t>(steps));
    const double ratio = std::log(eps_min / eps_max) / (steps - 1);
    for (int i = 0; i < steps; ++i) {
        eps[static_cast<std::size_t>(i)] = eps_max * std::exp(ratio * i);
    }
    return eps;
}

DimFit fit_dimension(DimMethod method, const std::vector<double>& eps,
                     const std::vector<double>& stats,
                     std::optional<std::pair<int, int>> window) {
    if (eps.size() != stats.size() || eps.empty())
        throw ValidationError("fit_dimension: eps and stats must match and be non-empty");
    for (std::size_t i = 1; i < eps.size(); ++i) {
        if (!(eps[i] < eps[i - 1]))
            throw ValidationError("fit_dimension: eps must be strictly decreasing");
    }
    const int k = static_cast<int>(eps.size());
    int lo = 0, hi = k;
    if (window) {
        lo = window->first;
        hi = window->second;
        if (lo < 0 || hi > k || hi - lo < 1)
            throw ValidationError("fit_dimension: bad window");
    } else {
        const int drop = static_cast<int>(0.2 * k);
        lo = drop;
        hi = k - drop;
    }

    std::vector<double> xs, ys;
    for (int i = lo; i < hi; ++i) {
        if (!(stats[static_cast<std::size_t>(i)] > 0.0)) continue;  // empty scale, no log
        const double x = method == DimMethod::BoxCount
                             ? std::log(1.0 / eps[static_cast<std::size_t>(i)])
                             : std::log(eps[static_cast<std::size_t>(i)]);
        xs.push_back(x);
        ys.push_back(std::log(stats[static_cast<std::size_t>(i)]));
    }
    if (xs.size() < 4)
        throw ValidationError("fit_dimension: fewer than 4 usable scales in the window");

    const LinearFit f = linear_fit(xs, ys);
    DimFit fit;
    fit.method = method;
    fit.eps = eps;
    fit.stat = stats;
    fit.slope = f.slope;
    fit.intercept = f.intercept;
    fit.slope_stderr = f.slope_stderr;
    fit.win_lo = lo;
    fit.win_hi = hi;
    fit.residuals.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fit.residuals.push_back(ys[i] - (f.intercept + f.slope * xs[i]));
    }
    return fit;
}

CorrSums correlation_sums(const std::vector<double>& points, int d,
                          const std::vector<double>& eps,
                          const PairSampleConfig& cfg) {
    const std::size_t n_all = point_count(points, d);
    if (n_all < 2) throw ValidationError("correlation_sums: need >= 2 points");
    for (double e : eps) {
        if (!(e > 0.0)) throw ValidationError("correlation_sums: eps must be > 0");
    }

    CorrSums out;
    std::vector<std::size_t> idx = pair_sample_indices(n_all, cfg, &out.subsampled);
    if (out.subsampled) out.subsample_seed = cfg.subsample_seed;
    const std::size_t n = idx.size();
    out.n_used = n;
    const std::vector<double> cols = to_columns(points, d, idx);

    // thresholds: squared radii plus a leading 0 to count coincident pairs
    std::vector<double> r2s;
    r2s.reserve(eps.size() + 1);
    r2s.push_back(0.0);
    for (double e : eps) r2s.push_back(e * e);
    std::vector<std::uint64_t> counts(r2s.size(), 0);

    const auto& kt = kernels::active();
    std::vector<double> q(static_cast<std::size_t>(d));
    for (std::size_t j = 1; j < n; ++j) {
        for (int k = 0; k < d; ++k) q[static_cast<std::size_t>(k)] = cols[static_cast<std::size_t>(k) * n + j];
        kt.multi_count(cols.data(), n, d, static_cast<int>(j), q.data(), r2s.data(),
                       static_cast<int>(r2s.size()), counts.data());
    }

    out.zero_pairs = static_cast<long long>(counts[0]);
    const double total_ordered = static_cast<double>(n) * static_cast<double>(n - 1);
    if (counts[0] * 2 >= static_cast<std::uint64_t>(total_ordered))
        throw ValidationError("correlation_sums: all points coincide");
    out.c.reserve(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double within = static_cast<double>(counts[i + 1] - counts[0]);
        out.c.push_back(2.0 * within / total_ordered);
    }
    return out;
}

double correlation_sum(const std::vector<double>& points, int d, double eps,
                       const PairSampleConfig& cfg) {
    return correlation_sums(points, d, {eps}, cfg).c[0];
}

double energy_estimate(const std::vector<double>& points, int d, double a,
                       const PairSampleConfig& cfg) {
    const std::size_t n_all = point_count(points, d);
    if (n_all < 2) throw ValidationError("energy_estimate: need >= 2 points");
    if (!(a > 0.0)) throw ValidationError("energy_estimate: exponent must be > 0");

    bool subsampled = false;
    std::vector<std::size_t> idx = pair_sample_indices(n_all, cfg, &subsampled);
    const std::size_t n = idx.size();
    const std::vector<double> cols = to_columns(points, d, idx);

    const double half_a = 0.5 * a;
    double sum = 0.0;
    long long zero_pairs = 0;
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            double d2 = 0.0;
            for (int k = 0; k < d; ++k) {
                const double diff = cols[static_cast<std::size_t>(k) * n + i] -
                                    cols[static_cast<std::size_t>(k) * n + j];
                d2 += diff * diff;
            }
            if (d2 == 0.0) {
                ++zero_pairs;
                continue;
            }
            if (a == 1.0) {
                sum += 1.0 / std::sqrt(d2);
            } else if (a == 2.0) {
                sum += 1.0 / d2;
            } else {
                sum += std::pow(d2, -half_a);
            }
        }
    }
    const double pairs =
        0.5 * static_cast<double>(n) * static_cast<double>(n - 1) - static_cast<double>(zero_pairs);
    if (!(pairs > 0.0)) throw ValidationError("energy_estimate: all points coincide");
    return sum / pairs;
}

DimFit estimate_dimension(DimMethod method, const std::vector<double>& points, int d,
                          const std::vector<double>& eps,
                          const PairSampleConfig& cfg) {
    if (method == DimMethod::BoxCount) {
        std::vector<double> stats;
        stats.reserve(eps.size());
        for (double e : eps) {
            stats.push_back(static_cast<double>(box_count(points, d, e)));
        }
        return fit_dimension(method, eps, stats);
    }
    const CorrSums cs = correlation_sums(points, d, eps, cfg);
    return fit_dimension(method, eps, cs.c);
}

}  // namespace agora
