#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agora/errors.hpp"
#include "agora/rng.hpp"
#include "agora/spatial_index.hpp"

namespace agora {

enum class DiscreteModel { Smooth, HardThreshold };

const char* discrete_model_name(DiscreteModel m);

struct AgoraStats {
    std::int64_t proposals = 0;
    std::int64_t rejections = 0;
    std::int64_t seeds = 0;
};

// Growing rooted tree of accepted points; index = arrival order, the
// origin root is point 0.
struct PointTree {
    int d = 2;
    DiscreteModel model = DiscreteModel::Smooth;
    std::vector<double> points;         // row-major
    std::vector<int> parent;            // parent[0] = -1
    std::vector<std::uint8_t> is_seed;  // is_seed[k] <=> parent[k] == 0
    AgoraStats stats;

    int size() const { return static_cast<int>(parent.size()); }
    const double* location(int k) const {
        return points.data() + static_cast<std::size_t>(k) * d;
    }
};

struct AgoraConfig {
    int d = 2;
    double alpha = 1.5;   // target dimension, 0 < alpha < d
    double theta = 1.0;   // innovation (seeding rate), >= 0
    std::int64_t n_points = 0;
    DiscreteModel model = DiscreteModel::Smooth;
    std::int64_t max_rejections_per_point = 1'000'000;
    std::optional<double> r_count_override;  // hard model neighbor-count radius
    std::uint64_t seed = 0;
};

void validate_config(const AgoraConfig& cfg);

// Thrown when one accepted point needs more than max_rejections_per_point
// proposals; carries the counters and the tree built so far.
class RejectionGuardError : public RuntimeError {
public:
    RejectionGuardError(const std::string& msg, AgoraStats stats, PointTree partial)
        : RuntimeError(msg), stats_(stats), partial_(std::move(partial)) {}
    const AgoraStats& stats() const { return stats_; }
    const PointTree& partial() const { return partial_; }

private:
    AgoraStats stats_;
    PointTree partial_;
};

// Distance to the nearest non-root point and its index; ties by lowest
// index. Throws ValidationError when only the root exists.
std::pair<double, int> min_dist(const double* x, const PointIndex& index);
std::pair<double, int> min_dist(const double* x, const PointTree& tree);  // builds a throwaway index

// Seeding probability theta/(theta + n - 1) with 0/0 = 1, n counting the root.
double seed_probability(double theta, int n);

// Incremental generator holding the tree, its spatial index and the RNG
// stream. Each step() appends exactly one accepted point.
class DiscreteSampler {
public:
    explicit DiscreteSampler(const AgoraConfig& cfg);
    DiscreteSampler(const AgoraConfig& cfg, const PointTree& resume);

    void step();
    const PointTree& tree() const { return tree_; }
    const PointIndex& index() const { return index_; }
    PointTree take() { return std::move(tree_); }

private:
    AgoraConfig cfg_;
    PointTree tree_;
    PointIndex index_;
    RngStream rng_;
};

// One accepted point appended; convenience wrappers over DiscreteSampler
// that rebuild the index from the tree (fine for small trees and tests).
PointTree step_smooth(PointTree tree, const AgoraConfig& cfg, RngStream& rng);
PointTree step_hard(PointTree tree, const AgoraConfig& cfg, RngStream& rng);

// Applies cfg.n_points accepted steps from a fresh root-only tree.
PointTree generate_discrete(const AgoraConfig& cfg);

}  // namespace agora
