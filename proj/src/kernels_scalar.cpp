#include "agora/kernels.hpp"

namespace agora::kernels {
namespace {

inline double slot_dist2(const double* block, std::size_t stride, int d, int j,
                         const double* q) {
    double acc = 0.0;
    for (int k = 0; k < d; ++k) {
        const double diff = q[k] - block[static_cast<std::size_t>(k) * stride + j];
        acc += diff * diff;
    }
    return acc;
}

MinResult min_dist2_scalar(const double* block, std::size_t stride, int d,
                           int count, const double* q) {
    MinResult best{0.0, -1};
    double best_d2 = 0.0;
    for (int j = 0; j < count; ++j) {
        const double d2 = slot_dist2(block, stride, d, j, q);
        if (best.index < 0 || d2 < best_d2) {
            best_d2 = d2;
            best.index = j;
        }
    }
    best.d2 = best_d2;
    return best;
}

int count_within_scalar(const double* block, std::size_t stride, int d,
                        int count, const double* q, double r2) {
    int n = 0;
    for (int j = 0; j < count; ++j) {
        if (slot_dist2(block, stride, d, j, q) <= r2) ++n;
    }
    return n;
}

void multi_count_scalar(const double* block, std::size_t stride, int d,
                        int count, const double* q, const double* r2s, int nr,
                        std::uint64_t* counts) {
    for (int j = 0; j < count; ++j) {
        const double d2 = slot_dist2(block, stride, d, j, q);
        for (int i = 0; i < nr; ++i) {
            if (d2 <= r2s[i]) ++counts[i];
        }
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{"scalar", &min_dist2_scalar,
                                   &count_within_scalar, &multi_count_scalar};
    return table;
}

}  // namespace agora::kernels
