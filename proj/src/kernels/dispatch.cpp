#include <cstdlib>
#include <cstring>

#include "qmine/common/errors.hpp"
#include "qmine/common/log.hpp"
#include "qmine/kernels/kernels.hpp"

namespace qmine::kernels {

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
    }
    return "unknown";
}

bool avx2_available() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

Isa resolve_isa() {
    const char* env = std::getenv("QMINE_KERNEL_ISA");
    if (env && *env) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!avx2_available())
                throw config_error("QMINE_KERNEL_ISA=avx2 but CPU lacks AVX2/FMA");
            return Isa::avx2;
        }
        throw config_error(std::string("unknown QMINE_KERNEL_ISA value: ") + env);
    }
    return avx2_available() ? Isa::avx2 : Isa::scalar;
}

}  // namespace

Isa active_isa() {
    static const Isa isa = [] {
        Isa resolved = resolve_isa();
        log_debug("kernels", std::string("using ") + isa_name(resolved) + " kernels");
        return resolved;
    }();
    return isa;
}

const Ops& active_ops() {
    return active_isa() == Isa::avx2 ? avx2_ops() : scalar_ops();
}

}  // namespace qmine::kernels
