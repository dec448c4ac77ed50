#include "agora/branching.hpp"

#include <cmath>
#include <new>
#include <queue>

#include "agora/errors.hpp"
#include "agora/stats.hpp"

namespace agora {
namespace {

struct Event {
    double t;
    int v;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.t != b.t) return a.t > b.t;
        return a.v > b.v;  // ties (probability zero) break toward the older vertex
    }
};

constexpr double kTimeOverflowGuard = 1e300;

}  // namespace

double next_child_time(double tau_current, double rho, RngStream& rng) {
    return tau_current * std::exp(rng.exponential() / rho);
}

BranchingTree generate_tree(const ProcessParams& params, const GenOptions& opt) {
    validate_params(params);
    if (opt.max_vertices < 1)
        throw ValidationError("generate_tree: max_vertices must be >= 1");
    if (opt.max_time && !(*opt.max_time >= 1.0))
        throw ValidationError("generate_tree: max_time must be >= 1");
    if (opt.max_depth && *opt.max_depth < 0)
        throw ValidationError("generate_tree: max_depth must be >= 0");

    BranchingTree tree;
    tree.params = params;
    tree.depth_limit = opt.max_depth;
    tree.has_locations = opt.with_locations;
    tree.trace.depth_limited = opt.max_depth.has_value();

    RngStream rng(params.seed);
    const int d = params.d;
    const double rho = params.rho;

    try {
        tree.parent.reserve(static_cast<std::size_t>(opt.max_vertices) < (1u << 20)
                                ? static_cast<std::size_t>(opt.max_vertices)
                                : (1u << 20));
        tree.parent.push_back(-1);
        tree.tau.push_back(1.0);
        tree.depth.push_back(0);
        if (opt.with_locations) tree.chi.assign(static_cast<std::size_t>(d), 0.0);

        std::priority_queue<Event, std::vector<Event>, EventAfter> heap;
        if (!opt.max_depth || *opt.max_depth > 0) {
            heap.push({next_child_time(1.0, rho, rng), 0});
        }

        tree.truncated_by = Truncation::ByCount;
        tree.horizon = 1.0;
        double disp[kMaxDim];

        while (tree.size() < opt.max_vertices) {
            if (heap.empty()) {
                // every live vertex sits at the depth limit
                tree.truncated_by = opt.max_time ? Truncation::ByTime : Truncation::ByCount;
                tree.horizon = opt.max_time ? *opt.max_time : tree.tau.back();
                return tree;
            }
            const Event e = heap.top();
            if (opt.max_time && e.t > *opt.max_time) {
                tree.truncated_by = Truncation::ByTime;
                tree.horizon = *opt.max_time;
                return tree;
            }
            if (e.t > kTimeOverflowGuard)
                throw RuntimeError("generate_tree: birth time exceeded overflow guard 1e300");
            heap.pop();

            const int id = tree.size();
            tree.parent.push_back(e.v);
            tree.tau.push_back(e.t);
            tree.depth.push_back(tree.depth[e.v] + 1);
            if (opt.with_locations) {
                sample_displacement(params.profile, d, e.t, rng, disp, params.beta);
                const double* px = tree.chi.data() + static_cast<std::size_t>(e.v) * d;
                for (int k = 0; k < d; ++k) tree.chi.push_back(px[k] + disp[k]);
            }
            heap.push({next_child_time(e.t, rho, rng), e.v});
            if (!opt.max_depth || tree.depth[id] < *opt.max_depth) {
                heap.push({next_child_time(e.t, rho, rng), id});
            }
            tree.trace.jump_times.push_back(e.t);
        }
        tree.truncated_by = Truncation::ByCount;
        tree.horizon = tree.tau.back();
    } catch (const std::bad_alloc&) {
        throw RuntimeError("generate_tree: memory budget exceeded");
    }
    return tree;
}

GrowthFit growth_exponent(const std::vector<GrowthTrace>& traces, double rho_hint,
                          double window) {
    if (traces.empty()) throw ValidationError("growth_exponent: no traces");
    if (!(rho_hint > 0.0)) throw ValidationError("growth_exponent: rho_hint must be > 0");
    if (!(window > 0.0 && window <= 1.0))
        throw ValidationError("growth_exponent: window must be in (0, 1]");

    GrowthFit fit;
    fit.replica_slopes.reserve(traces.size());
    fit.w_hats.reserve(traces.size());
    std::vector<double> xs, ys;
    for (const GrowthTrace& tr : traces) {
        if (tr.births() < 100)
            throw ValidationError("growth_exponent: trace has fewer than 100 births");
        if (tr.depth_limited)
            throw ValidationError("growth_exponent: depth-limited trace is not the full birth chain");
        const double hi = std::log(tr.jump_times.back());
        const double lo = std::log(tr.jump_times.front());
        const double cutoff = hi - window * (hi - lo);
        xs.clear();
        ys.clear();
        for (std::size_t i = 0; i < tr.births(); ++i) {
            const double x = std::log(tr.jump_times[i]);
            if (x >= cutoff) {
                xs.push_back(x);
                ys.push_back(std::log(tr.population_after(i)));
            }
        }
        fit.replica_slopes.push_back(linear_fit(xs, ys).slope);
        const double T = tr.jump_times.back();
        const double n_final = static_cast<double>(tr.births() + 1);
        fit.w_hats.push_back(n_final * std::pow(T, -rho_hint));
    }
    const MeanStats ms = mean_and_se(fit.replica_slopes);
    fit.slope = ms.mean;
    fit.std_error = ms.std_error;
    return fit;
}

}  // namespace agora
