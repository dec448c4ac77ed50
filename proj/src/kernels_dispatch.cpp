#include "agora/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace agora::kernels {
namespace {

const KernelTable* lookup(const char* name) {
    if (name == nullptr) return nullptr;
    if (std::strcmp(name, "scalar") == 0) return &scalar_table();
    if (std::strcmp(name, "avx2") == 0) return avx2_table();
    return nullptr;
}

const KernelTable* select_default() {
    if (const KernelTable* forced = lookup(std::getenv("AGORA_KERNELS"))) {
        return forced;
    }
    if (const KernelTable* t = avx2_table()) return t;
    return &scalar_table();
}

std::atomic<const KernelTable*> g_forced{nullptr};

}  // namespace

const KernelTable& active() {
    if (const KernelTable* forced = g_forced.load(std::memory_order_acquire)) {
        return *forced;
    }
    static const KernelTable* selected = select_default();
    return *selected;
}

void force(const char* name) {
    g_forced.store(lookup(name), std::memory_order_release);
}

}  // namespace agora::kernels
