// AVX2 variants of the distance kernels. Bit-exact with the scalar
// reference: identical per-slot operation order, mul+add only (no FMA),
// ties resolved by lowest slot via explicit (d2, slot) reduction.

#include "agora/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

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

inline __m256d block_dist2(const double* block, std::size_t stride, int d,
                           int j, const double* q) {
    __m256d acc = _mm256_setzero_pd();
    for (int k = 0; k < d; ++k) {
        const __m256d x = _mm256_loadu_pd(block + static_cast<std::size_t>(k) * stride + j);
        const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(q[k]), x);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    return acc;
}

MinResult min_dist2_avx2(const double* block, std::size_t stride, int d,
                         int count, const double* q) {
    MinResult best{0.0, -1};
    double best_d2 = 0.0;
    int j = 0;
    if (count >= 4) {
        __m256d lane_d2 = _mm256_set1_pd(__builtin_huge_val());
        __m256i lane_idx = _mm256_set1_epi64x(-1);
        for (; j + 4 <= count; j += 4) {
            const __m256d d2 = block_dist2(block, stride, d, j, q);
            // strict < keeps the earliest slot per lane
            const __m256d lt = _mm256_cmp_pd(d2, lane_d2, _CMP_LT_OQ);
            lane_d2 = _mm256_blendv_pd(lane_d2, d2, lt);
            const __m256i idx = _mm256_set_epi64x(j + 3, j + 2, j + 1, j);
            lane_idx = _mm256_castpd_si256(_mm256_blendv_pd(
                _mm256_castsi256_pd(lane_idx), _mm256_castsi256_pd(idx), lt));
        }
        alignas(32) double d2s[4];
        alignas(32) long long idxs[4];
        _mm256_store_pd(d2s, lane_d2);
        _mm256_store_si256(reinterpret_cast<__m256i*>(idxs), lane_idx);
        for (int lane = 0; lane < 4; ++lane) {
            if (idxs[lane] < 0) continue;
            const int slot = static_cast<int>(idxs[lane]);
            if (best.index < 0 || d2s[lane] < best_d2 ||
                (d2s[lane] == best_d2 && slot < best.index)) {
                best_d2 = d2s[lane];
                best.index = slot;
            }
        }
    }
    for (; j < count; ++j) {
        const double d2 = slot_dist2(block, stride, d, j, q);
        if (best.index < 0 || d2 < best_d2) {
            best_d2 = d2;
            best.index = j;
        }
    }
    best.d2 = best_d2;
    return best;
}

int count_within_avx2(const double* block, std::size_t stride, int d,
                      int count, const double* q, double r2) {
    int n = 0;
    int j = 0;
    const __m256d r2v = _mm256_set1_pd(r2);
    for (; j + 4 <= count; j += 4) {
        const __m256d d2 = block_dist2(block, stride, d, j, q);
        const __m256d le = _mm256_cmp_pd(d2, r2v, _CMP_LE_OQ);
        n += __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(le)));
    }
    for (; j < count; ++j) {
        if (slot_dist2(block, stride, d, j, q) <= r2) ++n;
    }
    return n;
}

void multi_count_avx2(const double* block, std::size_t stride, int d,
                      int count, const double* q, const double* r2s, int nr,
                      std::uint64_t* counts) {
    int j = 0;
    for (; j + 4 <= count; j += 4) {
        const __m256d d2 = block_dist2(block, stride, d, j, q);
        for (int i = 0; i < nr; ++i) {
            const __m256d le = _mm256_cmp_pd(d2, _mm256_set1_pd(r2s[i]), _CMP_LE_OQ);
            counts[i] += static_cast<std::uint64_t>(
                __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(le))));
        }
    }
    for (; j < count; ++j) {
        const double d2 = slot_dist2(block, stride, d, j, q);
        for (int i = 0; i < nr; ++i) {
            if (d2 <= r2s[i]) ++counts[i];
        }
    }
}

}  // namespace

const KernelTable* avx2_table() {
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    static const KernelTable table{"avx2", &min_dist2_avx2, &count_within_avx2,
                                   &multi_count_avx2};
    return &table;
}

}  // namespace agora::kernels

#else  // !__AVX2__

namespace agora::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace agora::kernels

#endif
