#include <atomic>
#include <cstdlib>
#include <string>

#include "tcsim/kernels.h"

namespace tcsim::kernels {

#if defined(TCSIM_BUILD_AVX2)
const KernelTable &avx2_kernels_table();
#endif

const KernelTable *avx2_kernels() {
#if defined(TCSIM_BUILD_AVX2)
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
    }();
    return supported ? &avx2_kernels_table() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable *initial_table() {
    const char *env = std::getenv("TCSIM_SIMD");
    if (env != nullptr && std::string(env) == "scalar") {
        return &scalar_kernels();
    }
    if (const KernelTable *t = avx2_kernels()) {
        return t;
    }
    return &scalar_kernels();
}

std::atomic<const KernelTable *> &slot() {
    static std::atomic<const KernelTable *> current{initial_table()};
    return current;
}

}  // namespace

const KernelTable &active() { return *slot().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
    const KernelTable *t = nullptr;
    if (name == "scalar") {
        t = &scalar_kernels();
    } else if (name == "avx2") {
        t = avx2_kernels();
    } else if (name == "auto") {
        t = avx2_kernels() ? avx2_kernels() : &scalar_kernels();
    }
    if (t == nullptr) {
        return false;
    }
    slot().store(t, std::memory_order_relaxed);
    return true;
}

}  // namespace tcsim::kernels
