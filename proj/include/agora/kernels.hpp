#pragma once

#include <cstddef>
#include <cstdint>

namespace agora::kernels {

// All kernels operate on a dimension-strided block of coordinates:
// coordinate k of slot j is block[k * stride + j], for j in [0, count).
// The spatial index stores its leaf buckets this way and the analytics
// paths lay whole point sets out the same way, so one kernel family
// serves both.

struct MinResult {
    double d2;      // squared distance of the winner
    int index;      // slot of the winner (-1 when count == 0)
};

// Argmin of squared euclidean distance to q over the block. Ties in d2 go
// to the lowest slot, which callers arrange to mean the lowest point id.
using MinDist2Fn = MinResult (*)(const double* block, std::size_t stride, int d,
                                 int count, const double* q);

// Number of slots with squared distance <= r2 (closed ball).
using CountWithinFn = int (*)(const double* block, std::size_t stride, int d,
                              int count, const double* q, double r2);

// One pass, many radii: counts[i] += #slots with d2 <= r2s[i]. Radii need
// not be sorted.
using MultiCountFn = void (*)(const double* block, std::size_t stride, int d,
                              int count, const double* q, const double* r2s,
                              int nr, std::uint64_t* counts);

struct KernelTable {
    const char* name;
    MinDist2Fn min_dist2;
    CountWithinFn count_within;
    MultiCountFn multi_count;
};

// Scalar reference implementation (always available).
const KernelTable& scalar_table();

// AVX2 implementation, or nullptr when unsupported by the build or CPU.
// Produces bit-identical results to the scalar table: same per-point
// operation order, no FMA contraction.
const KernelTable* avx2_table();

// Table selected at first use: best supported ISA, overridable with the
// AGORA_KERNELS environment variable ("scalar" or "avx2").
const KernelTable& active();

// Test hook: force a table by name until reset (nullptr restores auto).
void force(const char* name);

}  // namespace agora::kernels
