#include "sig/kernels.hpp"

// Scalar reference kernels. These deliberately mirror the AVX2 lane layout:
// reductions keep four independent accumulators combined as
// (acc0+acc2) + (acc1+acc3), so results are bit-identical across backends.
// Compiled with -ffp-contract=off (see src/CMakeLists.txt).

namespace sig::kern {

namespace philox {

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void block10(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                    std::uint32_t k0, std::uint32_t k1, std::uint32_t* out) {
    for (int r = 0; r < 10; ++r) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        const std::uint32_t n0 = hi1 ^ c1 ^ k0;
        const std::uint32_t n1 = lo1;
        const std::uint32_t n2 = hi0 ^ c3 ^ k1;
        const std::uint32_t n3 = lo0;
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;
        k0 += kWeyl0; k1 += kWeyl1;
    }
    out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3;
}

} // namespace philox

namespace {

void philox_blocks_scalar(std::uint32_t k0, std::uint32_t k1, std::uint64_t salt,
                          std::uint64_t block0, std::size_t nblocks, std::uint32_t* out) {
    const auto s_lo = static_cast<std::uint32_t>(salt);
    const auto s_hi = static_cast<std::uint32_t>(salt >> 32);
    for (std::size_t i = 0; i < nblocks; ++i) {
        const std::uint64_t n = block0 + i;
        philox::block10(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n >> 32),
                        s_lo, s_hi, k0, k1, out + 4 * i);
    }
}

double sum_scalar(const double* x, std::size_t n) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 += x[i];
        acc1 += x[i + 1];
        acc2 += x[i + 2];
        acc3 += x[i + 3];
    }
    double total = (acc0 + acc2) + (acc1 + acc3);
    for (; i < n; ++i) total += x[i];
    return total;
}

double sum_sq_dev_scalar(const double* x, std::size_t n, double mean) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const double d0 = x[i] - mean;
        const double d1 = x[i + 1] - mean;
        const double d2 = x[i + 2] - mean;
        const double d3 = x[i + 3] - mean;
        acc0 += d0 * d0;
        acc1 += d1 * d1;
        acc2 += d2 * d2;
        acc3 += d3 * d3;
    }
    double total = (acc0 + acc2) + (acc1 + acc3);
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        total += d * d;
    }
    return total;
}

void quadform2_scalar(const double* xy, std::size_t n, double m0, double m1,
                      double a, double b, double c, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xy[2 * i] - m0;
        const double dy = xy[2 * i + 1] - m1;
        const double t0 = a * dx + b * dy;
        const double t1 = b * dx + c * dy;
        out[i] = dx * t0 + dy * t1;
    }
}

std::size_t count_ge_scalar(const double* x, std::size_t n, double t) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        count += (x[i] >= t) ? 1u : 0u;
    }
    return count;
}

} // namespace

const Kernels& scalar_table() {
    static const Kernels table{
        &philox_blocks_scalar, &sum_scalar, &sum_sq_dev_scalar,
        &quadform2_scalar,     &count_ge_scalar,
    };
    return table;
}

} // namespace sig::kern
