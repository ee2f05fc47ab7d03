#include "plap/kernels.hpp"

#include "plap/core.hpp"

#include <cstdlib>
#include <string>

namespace plap::kernels {

bool avx2_available()
{
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa active_isa()
{
    static const Isa isa = [] {
        const char* env = std::getenv("PLAP_KERNELS");
        const std::string choice = env != nullptr ? env : "";
        if (choice == "scalar") {
            return Isa::Scalar;
        }
        if (choice == "avx2") {
            require(avx2_available(), ErrorKind::Validation, "PLAP_KERNELS=avx2 but the CPU lacks AVX2/FMA");
            return Isa::Avx2;
        }
        require(choice.empty(), ErrorKind::Validation, "PLAP_KERNELS must be scalar or avx2");
        return avx2_available() ? Isa::Avx2 : Isa::Scalar;
    }();
    return isa;
}

const char* isa_name(Isa isa)
{
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

void evaluate(const ElementBatch& batch, const double* u, double delta2, double p, ElementResult& out)
{
    if (active_isa() == Isa::Avx2) {
        evaluate_avx2(batch, u, delta2, p, out);
    } else {
        evaluate_scalar(batch, u, delta2, p, out);
    }
}

}  // namespace plap::kernels
