#include "citeclass/simd/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string_view>

namespace citeclass::simd {

namespace {

double energy_scalar(const double* x, const double* y, const double* c, std::size_t n, double* min_dist2) {
    double e = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            const double d2 = dx * dx + dy * dy;
            dmin = d2 < dmin ? d2 : dmin;
            const double cc = c[i] * c[j];
            if (cc != 0.0) row += cc * (0.5 * std::log(d2));
        }
        e -= row;
    }
    if (min_dist2) *min_dist2 = dmin;
    return e;
}

void gradient_scalar(const double* x, const double* y, const double* c, std::size_t n, double* gx, double* gy) {
    for (std::size_t i = 0; i < n; ++i) {
        if (c[i] == 0.0) continue;
        double sx = 0.0, sy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            const double d2 = dx * dx + dy * dy;
            if (d2 == 0.0) continue;
            const double f = c[j] / d2;
            sx += f * dx;
            sy += f * dy;
        }
        gx[i] -= c[i] * sx;
        gy[i] -= c[i] * sy;
    }
}

} // namespace

namespace detail {
const RepulsionKernels kScalarKernels{&energy_scalar, &gradient_scalar};
} // namespace detail

const char* isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) noexcept {
    switch (isa) {
    case Isa::scalar:
        return true;
    case Isa::avx2:
#if defined(CITECLASS_HAVE_AVX2)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

Isa detect_isa() noexcept {
    if (const char* env = std::getenv("CITECLASS_SIMD"); env && std::string_view(env) == "scalar")
        return Isa::scalar;
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

const RepulsionKernels& repulsion_kernels(Isa isa) {
#if defined(CITECLASS_HAVE_AVX2)
    if (isa == Isa::avx2 && isa_available(Isa::avx2)) return detail::kAvx2Kernels;
#endif
    (void)isa;
    return detail::kScalarKernels;
}

const RepulsionKernels& repulsion_kernels() {
    static const RepulsionKernels& active = repulsion_kernels(detect_isa());
    return active;
}

} // namespace citeclass::simd
