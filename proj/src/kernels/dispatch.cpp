#include <cstdlib>
#include <string_view>

#include "inkgrain/kernels.hpp"

namespace inkgrain::kernels {

#ifdef INKGRAIN_HAVE_AVX2
const KernelTable& avx2_table();
#endif

const KernelTable* avx2() {
#ifdef INKGRAIN_HAVE_AVX2
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* env = std::getenv("INKGRAIN_KERNELS");
        if (env != nullptr && std::string_view(env) == "scalar") return scalar();
        if (const KernelTable* t = avx2()) return *t;
        return scalar();
    }();
    return chosen;
}

}  // namespace inkgrain::kernels
