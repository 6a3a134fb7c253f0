#pragma once

#include <cstddef>
#include <cstdint>

namespace sig::kern {

/// Data-parallel primitives behind the Monte-Carlo loops. Every entry has a
/// scalar reference implementation and (on x86-64) an AVX2 variant selected
/// at runtime. The two are bit-identical by construction: both are compiled
/// with FP contraction off, the scalar reference replicates the AVX2 4-lane
/// blocking and horizontal-reduction order, and the counter-based generator
/// is pure integer arithmetic.
struct Kernels {
    /// Philox4x32-10 block generator. Writes nblocks * 4 words: block i uses
    /// counter (lo32(block0+i), hi32(block0+i), lo32(salt), hi32(salt)) and
    /// key (k0, k1), and emits its four outputs in order.
    void (*philox_blocks)(std::uint32_t k0, std::uint32_t k1, std::uint64_t salt,
                          std::uint64_t block0, std::size_t nblocks, std::uint32_t* out);

    /// Sum of x[0..n), 4-lane blocked.
    double (*sum)(const double* x, std::size_t n);

    /// Sum of (x[i] - mean)^2, 4-lane blocked.
    double (*sum_sq_dev)(const double* x, std::size_t n, double mean);

    /// Batch symmetric quadratic form on packed 2-D points:
    ///   out[i] = d' * [a b; b c] * d  with  d = (xy[2i] - m0, xy[2i+1] - m1).
    void (*quadform2)(const double* xy, std::size_t n, double m0, double m1,
                      double a, double b, double c, double* out);

    /// Number of entries with x[i] >= t (NaN never counts).
    std::size_t (*count_ge)(const double* x, std::size_t n, double t);
};

enum class Backend { Scalar, Avx2 };

/// The dispatch table currently in effect. Default selection: AVX2 when the
/// CPU supports it, else scalar; the SIG_KERNELS environment variable
/// ("auto" | "scalar" | "avx2") overrides at process start.
[[nodiscard]] const Kernels& active();

[[nodiscard]] Backend active_backend();
[[nodiscard]] bool avx2_supported();

/// Force a backend (tests, benchmarking). Raises sig::Unsupported when the
/// requested backend is unavailable on this machine.
void set_backend(Backend b);

/// Reference table, always available (used by equivalence tests).
[[nodiscard]] const Kernels& scalar_table();

/// AVX2 table, or nullptr when this build carries no AVX2 translation unit
/// or the CPU lacks AVX2.
[[nodiscard]] const Kernels* avx2_table_or_null();

} // namespace sig::kern
