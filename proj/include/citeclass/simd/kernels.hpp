#pragma once

// Pairwise repulsion kernels for the force-directed layout. Every variant
// computes the same quantity; the scalar one is the reference, the others
// must agree with it to rounding (see tests/unit/test_simd.cpp).

#include <cstddef>

namespace citeclass::simd {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa) noexcept;

/// True when the variant is compiled in and the CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Best available variant. CITECLASS_SIMD=scalar in the environment forces
/// the reference kernels.
Isa detect_isa() noexcept;

struct RepulsionKernels {
    /// -sum_{i<j} c_i c_j ln |p_i - p_j|. Also stores the smallest squared
    /// pairwise distance in *min_dist2 (0 means two nodes coincide).
    double (*energy)(const double* x, const double* y, const double* c, std::size_t n, double* min_dist2);

    /// Adds d/dp_i of the energy above to (gx[i], gy[i]) for every i.
    /// Coincident pairs contribute nothing.
    void (*gradient)(const double* x, const double* y, const double* c, std::size_t n, double* gx, double* gy);
};

const RepulsionKernels& repulsion_kernels(Isa isa);

/// Kernels for detect_isa(), resolved once.
const RepulsionKernels& repulsion_kernels();

namespace detail {
extern const RepulsionKernels kScalarKernels;
#if defined(CITECLASS_HAVE_AVX2)
extern const RepulsionKernels kAvx2Kernels;
#endif
} // namespace detail

} // namespace citeclass::simd
