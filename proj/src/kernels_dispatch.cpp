#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace dephaser::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(DEPHASER_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

bool scalar_forced() {
    const char* env = std::getenv("DEPHASER_SIMD");
    return env != nullptr && std::string_view(env) == "scalar";
}

}  // namespace

const KernelTable& scalar() {
    static const KernelTable table{"scalar", &detail::cgemm_scalar, &detail::caxpy_scalar,
                                   &detail::rate_row_scalar};
    return table;
}

const KernelTable* avx2() {
#if defined(DEPHASER_HAVE_AVX2)
    static const KernelTable table{"avx2", &detail::cgemm_avx2, &detail::caxpy_avx2,
                                   &detail::rate_row_avx2};
    static const bool supported = cpu_has_avx2();
    return supported ? &table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        if (!scalar_forced()) {
            if (const KernelTable* simd = avx2()) return *simd;
        }
        return scalar();
    }();
    return chosen;
}

}  // namespace dephaser::kernels
