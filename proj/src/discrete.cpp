#include "agora/discrete.hpp"

#include <cmath>

#include "agora/profiles.hpp"

namespace agora {
namespace {

constexpr int kRoot = 0;

PointTree make_root_tree(const AgoraConfig& cfg) {
    PointTree tree;
    tree.d = cfg.d;
    tree.model = cfg.model;
    tree.points.assign(static_cast<std::size_t>(cfg.d), 0.0);
    tree.parent.push_back(-1);
    tree.is_seed.push_back(0);
    return tree;
}

void append_point(PointTree& tree, PointIndex& index, const double* p, int parent,
                  bool seed) {
    tree.points.insert(tree.points.end(), p, p + tree.d);
    tree.parent.push_back(parent);
    tree.is_seed.push_back(seed ? 1 : 0);
    if (seed) ++tree.stats.seeds;
    index.insert(p);
}

[[noreturn]] void throw_guard(const char* model, const AgoraConfig& cfg,
                              const PointTree& tree) {
    throw RejectionGuardError(
        std::string(model) + " model: rejection guard exceeded (" +
            std::to_string(cfg.max_rejections_per_point) +
            " rejections for one point; tree size " + std::to_string(tree.size()) + ")",
        tree.stats, tree);
}

// Smooth minimum-distance step. The seeding trial runs once per accepted
// point, so the seed count follows the Chinese-restaurant law exactly; on
// failure the proposal is re-drawn until exp(-Delta n^{1/alpha}) accepts.
void do_step_smooth(PointTree& tree, PointIndex& index, const AgoraConfig& cfg,
                    RngStream& rng) {
    const int n = tree.size();
    double x[kMaxDim];
    rng.uniform_in_ball(cfg.d, x);
    ++tree.stats.proposals;
    if (rng.u01() < seed_probability(cfg.theta, n)) {
        append_point(tree, index, x, kRoot, /*seed=*/true);
        return;
    }
    // Bernoulli failure is impossible at n == 1, so a non-root point exists.
    const double scale = std::pow(static_cast<double>(n), 1.0 / cfg.alpha);
    for (std::int64_t rejections = 0;; ++rejections) {
        const auto [delta, arg_idx] = min_dist(x, index);
        if (rng.u01() < std::exp(-delta * scale)) {
            append_point(tree, index, x, arg_idx, /*seed=*/false);
            return;
        }
        ++tree.stats.rejections;
        if (rejections + 1 >= cfg.max_rejections_per_point) throw_guard("smooth", cfg, tree);
        rng.uniform_in_ball(cfg.d, x);
        ++tree.stats.proposals;
    }
}

// Hard-threshold step: propose near a uniformly chosen non-root point and
// thin by the inverse neighbor count within r_count.
void do_step_hard(PointTree& tree, PointIndex& index, const AgoraConfig& cfg,
                  RngStream& rng) {
    const int n = tree.size();
    if (rng.u01() < seed_probability(cfg.theta, n)) {
        double x[kMaxDim];
        rng.uniform_in_ball(cfg.d, x);
        ++tree.stats.proposals;
        append_point(tree, index, x, kRoot, /*seed=*/true);
        return;
    }
    const double r_prop = std::pow(static_cast<double>(n), -1.0 / cfg.alpha);
    const double r_count = cfg.r_count_override.value_or(r_prop);
    double y[kMaxDim];
    for (std::int64_t rejections = 0;; ++rejections) {
        ++tree.stats.proposals;
        const int z = 1 + static_cast<int>(rng.u01() * (n - 1));
        rng.uniform_in_ball(cfg.d, y);
        for (int k = 0; k < cfg.d; ++k) y[k] *= r_prop;
        clamp_to_ball(y, cfg.d, r_prop);
        const double* pz = tree.location(z);
        for (int k = 0; k < cfg.d; ++k) y[k] += pz[k];
        // k_near >= 1 whenever r_count >= r_prop (z itself is in the ball);
        // a smaller override can produce k = 0, which is a plain rejection.
        const int k_near = index.count_within(y, r_count, /*exclude_root=*/true);
        if (k_near >= 1 && rng.u01() < 1.0 / k_near) {
            append_point(tree, index, y, z, /*seed=*/false);
            return;
        }
        ++tree.stats.rejections;
        if (rejections + 1 >= cfg.max_rejections_per_point) throw_guard("hard", cfg, tree);
    }
}

}  // namespace

const char* discrete_model_name(DiscreteModel m) {
    return m == DiscreteModel::Smooth ? "smooth" : "hard";
}

void validate_config(const AgoraConfig& cfg) {
    if (cfg.d < 2 || cfg.d > kMaxDim)
        throw ValidationError("discrete model: d must be in [2, " +
                              std::to_string(kMaxDim) + "]");
    if (!(cfg.alpha > 0.0) || !(cfg.alpha < cfg.d))
        throw ValidationError("discrete model: alpha must satisfy 0 < alpha < d");
    if (!(cfg.theta >= 0.0))
        throw ValidationError("discrete model: theta must be >= 0");
    if (cfg.n_points < 0)
        throw ValidationError("discrete model: n_points must be >= 0");
    if (cfg.max_rejections_per_point < 1)
        throw ValidationError("discrete model: max_rejections_per_point must be >= 1");
    if (cfg.r_count_override && !(*cfg.r_count_override > 0.0))
        throw ValidationError("discrete model: r_count override must be > 0");
}

double seed_probability(double theta, int n) {
    if (n <= 1) return 1.0;  // theta/theta, with 0/0 = 1
    return theta / (theta + static_cast<double>(n - 1));
}

std::pair<double, int> min_dist(const double* x, const PointIndex& index) {
    if (index.size() < 2) throw ValidationError("min_dist: no non-root points");
    const auto [id, dist] = index.nearest(x, /*exclude_root=*/true);
    return {dist, id};
}

std::pair<double, int> min_dist(const double* x, const PointTree& tree) {
    PointIndex index(tree.d, tree.points);
    return min_dist(x, index);
}

DiscreteSampler::DiscreteSampler(const AgoraConfig& cfg)
    : cfg_(cfg), tree_(), index_(cfg.d), rng_(cfg.seed) {
    validate_config(cfg_);
    tree_ = make_root_tree(cfg_);
    index_.insert(tree_.location(kRoot));
}

DiscreteSampler::DiscreteSampler(const AgoraConfig& cfg, const PointTree& resume)
    : cfg_(cfg), tree_(resume), index_(cfg.d, resume.points), rng_(cfg.seed) {
    validate_config(cfg_);
    if (resume.d != cfg.d)
        throw ValidationError("DiscreteSampler: tree dimension does not match config");
}

void DiscreteSampler::step() {
    if (cfg_.model == DiscreteModel::Smooth) {
        do_step_smooth(tree_, index_, cfg_, rng_);
    } else {
        do_step_hard(tree_, index_, cfg_, rng_);
    }
}

PointTree step_smooth(PointTree tree, const AgoraConfig& cfg, RngStream& rng) {
    validate_config(cfg);
    if (tree.d != cfg.d) throw ValidationError("step_smooth: dimension mismatch");
    PointIndex index(tree.d, tree.points);
    do_step_smooth(tree, index, cfg, rng);
    return tree;
}

PointTree step_hard(PointTree tree, const AgoraConfig& cfg, RngStream& rng) {
    validate_config(cfg);
    if (tree.d != cfg.d) throw ValidationError("step_hard: dimension mismatch");
    PointIndex index(tree.d, tree.points);
    do_step_hard(tree, index, cfg, rng);
    return tree;
}

PointTree generate_discrete(const AgoraConfig& cfg) {
    validate_config(cfg);
    DiscreteSampler sampler(cfg);
    for (std::int64_t i = 0; i < cfg.n_points; ++i) sampler.step();
    return sampler.take();
}

}  // namespace agora
