#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace agora {

// Exact nearest-neighbor and fixed-radius count queries over an
// incrementally growing point set. Bucket k-d tree: internal nodes carry
// split planes, bounding boxes and subtree counts; leaves hold up to
// kBucket points in a dimension-strided block scanned by the active
// distance kernel. Results are always identical to brute force; ties in
// distance resolve to the lowest point id.
//
// Single writer during generation; const queries afterwards are safe to
// share across threads.
class PointIndex {
public:
    static constexpr int kBucket = 16;

    explicit PointIndex(int dim);
    PointIndex(int dim, const std::vector<double>& flat_points);  // bulk load

    // Appends a point (id = insertion order). Throws ValidationError on a
    // non-finite coordinate.
    int insert(const double* p);

    // Nearest point to q. exclude_root drops point id 0 from candidates.
    // Returns (id, euclidean distance). Throws ValidationError when empty
    // after exclusion.
    std::pair<int, double> nearest(const double* q, bool exclude_root = false) const;

    // Nearest point with one id removed from candidacy (-1 disables);
    // used for self-excluding nearest-neighbor sweeps.
    std::pair<int, double> nearest_excluding(const double* q, int excluded_id) const;

    // Closed-ball count: #points with |p - q| <= r. exclude_root drops id 0.
    int count_within(const double* q, double r, bool exclude_root = false) const;

    int size() const { return static_cast<int>(n_); }
    int dim() const { return d_; }
    const double* point(int id) const { return pts_.data() + static_cast<std::size_t>(id) * d_; }

private:
    struct Node {
        int left = -1;
        int right = -1;
        int leaf = -1;    // slab id when leaf, -1 when internal
        int axis = -1;
        double split = 0.0;
        int count = 0;    // points in subtree
    };

    int d_;
    std::size_t n_ = 0;
    std::vector<double> pts_;        // row-major id -> coords
    std::vector<Node> nodes_;        // nodes_[0] is the root once non-empty
    std::vector<double> bbox_;       // per node: lo[d], hi[d]
    std::vector<double> leaf_coords_;  // per slab: kBucket * d, dim stride kBucket
    std::vector<int> leaf_ids_;        // per slab: kBucket ids, ascending
    std::vector<int> free_slabs_;
    std::size_t last_build_n_ = 0;

    int new_leaf_slab();
    int new_node_leaf();
    void release_slab(int slab);
    void leaf_append(Node& node, int id);
    void split_leaf(int node_id);
    void insert_into_tree(int id);
    void rebuild();
    int build_recursive(int* ids, int count);
    double bbox_min_dist2(int node_id, const double* q) const;
    double bbox_max_dist2(int node_id, const double* q) const;
    void nearest_rec(int node_id, const double* q, int excluded_id,
                     double& best_d2, int& best_id) const;
    long long count_rec(int node_id, const double* q, double r2) const;
};

}  // namespace agora
