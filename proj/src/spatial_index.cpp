#include "agora/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agora/errors.hpp"
#include "agora/kernels.hpp"

namespace agora {
namespace {

inline double dist2(const double* a, const double* b, int d) {
    double acc = 0.0;
    for (int k = 0; k < d; ++k) {
        const double diff = a[k] - b[k];
        acc += diff * diff;
    }
    return acc;
}

}  // namespace

PointIndex::PointIndex(int dim) : d_(dim) {
    if (dim < 1 || dim > 64) throw ValidationError("PointIndex: bad dimension");
}

PointIndex::PointIndex(int dim, const std::vector<double>& flat_points)
    : PointIndex(dim) {
    if (flat_points.size() % static_cast<std::size_t>(dim) != 0)
        throw ValidationError("PointIndex: flat point array not a multiple of dim");
    pts_ = flat_points;
    for (const double c : pts_) {
        if (!std::isfinite(c)) throw ValidationError("PointIndex: non-finite coordinate");
    }
    n_ = pts_.size() / static_cast<std::size_t>(dim);
    rebuild();
}

int PointIndex::new_leaf_slab() {
    if (!free_slabs_.empty()) {
        const int slab = free_slabs_.back();
        free_slabs_.pop_back();
        return slab;
    }
    const int slab = static_cast<int>(leaf_ids_.size() / kBucket);
    leaf_coords_.resize(leaf_coords_.size() + static_cast<std::size_t>(kBucket) * d_);
    leaf_ids_.resize(leaf_ids_.size() + kBucket, -1);
    return slab;
}

void PointIndex::release_slab(int slab) { free_slabs_.push_back(slab); }

int PointIndex::new_node_leaf() {
    Node node;
    node.leaf = new_leaf_slab();
    node.count = 0;
    nodes_.push_back(node);
    bbox_.resize(bbox_.size() + 2 * static_cast<std::size_t>(d_));
    const int id = static_cast<int>(nodes_.size()) - 1;
    double* box = bbox_.data() + static_cast<std::size_t>(id) * 2 * d_;
    for (int k = 0; k < d_; ++k) {
        box[k] = std::numeric_limits<double>::infinity();
        box[d_ + k] = -std::numeric_limits<double>::infinity();
    }
    return id;
}

void PointIndex::leaf_append(Node& node, int id) {
    const std::size_t base = static_cast<std::size_t>(node.leaf) * kBucket * d_;
    const double* p = point(id);
    for (int k = 0; k < d_; ++k) {
        leaf_coords_[base + static_cast<std::size_t>(k) * kBucket + node.count] = p[k];
    }
    leaf_ids_[static_cast<std::size_t>(node.leaf) * kBucket + node.count] = id;
    ++node.count;
}

// Splits a full leaf into two by median rank along the widest axis.
// The (coordinate, id) tie-break guarantees both sides are non-empty even
// for fully coincident buckets.
void PointIndex::split_leaf(int node_id) {
    const int slab = nodes_[node_id].leaf;
    const int count = nodes_[node_id].count;
    int ids[kBucket];
    std::copy_n(leaf_ids_.begin() + static_cast<std::size_t>(slab) * kBucket, count, ids);

    int axis = 0;
    double best_extent = -1.0;
    for (int k = 0; k < d_; ++k) {
        double lo = point(ids[0])[k], hi = lo;
        for (int j = 1; j < count; ++j) {
            lo = std::min(lo, point(ids[j])[k]);
            hi = std::max(hi, point(ids[j])[k]);
        }
        if (hi - lo > best_extent) {
            best_extent = hi - lo;
            axis = k;
        }
    }
    const auto less = [&](int a, int b) {
        const double ca = point(a)[axis], cb = point(b)[axis];
        return ca < cb || (ca == cb && a < b);
    };
    std::sort(ids, ids + count, less);
    const int mid = count / 2;

    const int left_id = new_node_leaf();
    const int right_id = new_node_leaf();
    Node& node = nodes_[node_id];  // re-fetch: new_node_leaf may reallocate
    node.axis = axis;
    node.split = point(ids[mid])[axis];
    node.leaf = -1;
    node.left = left_id;
    node.right = right_id;
    release_slab(slab);

    auto fill = [&](int child_id, int* first, int* last) {
        std::sort(first, last);  // slot order must be ascending id
        Node& child = nodes_[child_id];
        double* box = bbox_.data() + static_cast<std::size_t>(child_id) * 2 * d_;
        for (int* it = first; it != last; ++it) {
            leaf_append(child, *it);
            const double* p = point(*it);
            for (int k = 0; k < d_; ++k) {
                box[k] = std::min(box[k], p[k]);
                box[d_ + k] = std::max(box[d_ + k], p[k]);
            }
        }
    };
    fill(left_id, ids, ids + mid);
    fill(right_id, ids + mid, ids + count);
}

void PointIndex::insert_into_tree(int id) {
    const double* p = point(id);
    int cur = 0;
    for (;;) {
        Node& node = nodes_[cur];
        ++node.count;
        double* box = bbox_.data() + static_cast<std::size_t>(cur) * 2 * d_;
        for (int k = 0; k < d_; ++k) {
            box[k] = std::min(box[k], p[k]);
            box[d_ + k] = std::max(box[d_ + k], p[k]);
        }
        if (node.leaf >= 0) {
            if (node.count <= kBucket) {  // count was pre-incremented
                --node.count;
                leaf_append(node, id);
                ++node.count;
                return;
            }
            --node.count;
            split_leaf(cur);
            ++nodes_[cur].count;
            // fall through to route into the fresh children
        }
        const Node& n = nodes_[cur];
        cur = (p[n.axis] < n.split) ? n.left : n.right;
    }
}

int PointIndex::insert(const double* p) {
    for (int k = 0; k < d_; ++k) {
        if (!std::isfinite(p[k])) throw ValidationError("PointIndex: non-finite coordinate");
    }
    pts_.insert(pts_.end(), p, p + d_);
    const int id = static_cast<int>(n_);
    ++n_;
    if (nodes_.empty()) {
        const int root = new_node_leaf();
        (void)root;
        leaf_append(nodes_[0], id);
        nodes_[0].count = 1;
        double* box = bbox_.data();
        for (int k = 0; k < d_; ++k) box[k] = box[d_ + k] = p[k];
        last_build_n_ = 1;
        return id;
    }
    if (n_ >= 64 && n_ >= 2 * last_build_n_) {
        rebuild();
    } else {
        insert_into_tree(id);
    }
    return id;
}

void PointIndex::rebuild() {
    nodes_.clear();
    bbox_.clear();
    leaf_coords_.clear();
    leaf_ids_.clear();
    free_slabs_.clear();
    last_build_n_ = n_;
    if (n_ == 0) return;
    std::vector<int> ids(n_);
    for (std::size_t i = 0; i < n_; ++i) ids[i] = static_cast<int>(i);
    build_recursive(ids.data(), static_cast<int>(n_));
}

int PointIndex::build_recursive(int* ids, int count) {
    const int node_id = new_node_leaf();
    double* box = bbox_.data() + static_cast<std::size_t>(node_id) * 2 * d_;
    for (int j = 0; j < count; ++j) {
        const double* p = point(ids[j]);
        for (int k = 0; k < d_; ++k) {
            box[k] = std::min(box[k], p[k]);
            box[d_ + k] = std::max(box[d_ + k], p[k]);
        }
    }
    if (count <= kBucket) {
        std::sort(ids, ids + count);
        Node& node = nodes_[node_id];
        node.count = 0;
        for (int j = 0; j < count; ++j) leaf_append(node, ids[j]);
        return node_id;
    }
    int axis = 0;
    double best_extent = -1.0;
    for (int k = 0; k < d_; ++k) {
        const double extent = box[d_ + k] - box[k];
        if (extent > best_extent) {
            best_extent = extent;
            axis = k;
        }
    }
    const int mid = count / 2;
    std::nth_element(ids, ids + mid, ids + count, [&](int a, int b) {
        const double ca = point(a)[axis], cb = point(b)[axis];
        return ca < cb || (ca == cb && a < b);
    });
    const double split = point(ids[mid])[axis];
    const int slab = nodes_[node_id].leaf;
    const int left = build_recursive(ids, mid);
    const int right = build_recursive(ids + mid, count - mid);
    Node& node = nodes_[node_id];
    node.leaf = -1;
    node.axis = axis;
    node.split = split;
    node.left = left;
    node.right = right;
    node.count = count;
    release_slab(slab);
    return node_id;
}

double PointIndex::bbox_min_dist2(int node_id, const double* q) const {
    const double* box = bbox_.data() + static_cast<std::size_t>(node_id) * 2 * d_;
    double acc = 0.0;
    for (int k = 0; k < d_; ++k) {
        double gap = 0.0;
        if (q[k] < box[k]) gap = box[k] - q[k];
        else if (q[k] > box[d_ + k]) gap = q[k] - box[d_ + k];
        acc += gap * gap;
    }
    return acc;
}

double PointIndex::bbox_max_dist2(int node_id, const double* q) const {
    const double* box = bbox_.data() + static_cast<std::size_t>(node_id) * 2 * d_;
    double acc = 0.0;
    for (int k = 0; k < d_; ++k) {
        const double gap = std::max(std::abs(q[k] - box[k]), std::abs(q[k] - box[d_ + k]));
        acc += gap * gap;
    }
    return acc;
}

void PointIndex::nearest_rec(int node_id, const double* q, int excluded_id,
                             double& best_d2, int& best_id) const {
    const Node& node = nodes_[node_id];
    if (node.leaf >= 0) {
        const double* block =
            leaf_coords_.data() + static_cast<std::size_t>(node.leaf) * kBucket * d_;
        const int* ids = leaf_ids_.data() + static_cast<std::size_t>(node.leaf) * kBucket;
        const auto& kt = kernels::active();
        kernels::MinResult r = kt.min_dist2(block, kBucket, d_, node.count, q);
        if (r.index >= 0 && ids[r.index] == excluded_id) {
            // drop the excluded point and rescan the bucket
            r.index = -1;
            double alt_d2 = 0.0;
            for (int j = 0; j < node.count; ++j) {
                if (ids[j] == excluded_id) continue;
                double acc = 0.0;
                for (int k = 0; k < d_; ++k) {
                    const double diff =
                        q[k] - block[static_cast<std::size_t>(k) * kBucket + j];
                    acc += diff * diff;
                }
                if (r.index < 0 || acc < alt_d2) {
                    alt_d2 = acc;
                    r.index = j;
                }
            }
            r.d2 = alt_d2;
        }
        if (r.index >= 0) {
            const int id = ids[r.index];
            if (best_id < 0 || r.d2 < best_d2 || (r.d2 == best_d2 && id < best_id)) {
                best_d2 = r.d2;
                best_id = id;
            }
        }
        return;
    }
    const double dl = bbox_min_dist2(node.left, q);
    const double dr = bbox_min_dist2(node.right, q);
    const int first = (dl <= dr) ? node.left : node.right;
    const int second = (dl <= dr) ? node.right : node.left;
    const double dfirst = std::min(dl, dr);
    const double dsecond = std::max(dl, dr);
    if (best_id < 0 || dfirst <= best_d2) nearest_rec(first, q, excluded_id, best_d2, best_id);
    if (best_id < 0 || dsecond <= best_d2) nearest_rec(second, q, excluded_id, best_d2, best_id);
}

std::pair<int, double> PointIndex::nearest_excluding(const double* q,
                                                     int excluded_id) const {
    const int available = size() - ((excluded_id >= 0 && excluded_id < size()) ? 1 : 0);
    if (available < 1) throw ValidationError("nearest: index empty after exclusion");
    double best_d2 = 0.0;
    int best_id = -1;
    nearest_rec(0, q, excluded_id, best_d2, best_id);
    return {best_id, std::sqrt(best_d2)};
}

std::pair<int, double> PointIndex::nearest(const double* q, bool exclude_root) const {
    return nearest_excluding(q, exclude_root ? 0 : -1);
}

long long PointIndex::count_rec(int node_id, const double* q, double r2) const {
    const Node& node = nodes_[node_id];
    if (bbox_min_dist2(node_id, q) > r2) return 0;
    if (bbox_max_dist2(node_id, q) <= r2) return node.count;
    if (node.leaf >= 0) {
        const double* block =
            leaf_coords_.data() + static_cast<std::size_t>(node.leaf) * kBucket * d_;
        return kernels::active().count_within(block, kBucket, d_, node.count, q, r2);
    }
    return count_rec(node.left, q, r2) + count_rec(node.right, q, r2);
}

int PointIndex::count_within(const double* q, double r, bool exclude_root) const {
    if (!(r > 0.0)) throw ValidationError("count_within: radius must be > 0");
    if (n_ == 0) return 0;
    const double r2 = r * r;
    long long n = count_rec(0, q, r2);
    if (exclude_root && dist2(q, point(0), d_) <= r2) --n;
    return static_cast<int>(n);
}

}  // namespace agora
