// AVX2 kernel variants. Compiled with -mavx2 -ffp-contract=off; no FMA is
// used anywhere so every double matches the scalar reference bit for bit.
#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "sig/kernels.hpp"

namespace sig::kern {

namespace {

inline constexpr std::uint32_t kMul0 = 0xD2511F53u;
inline constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// 8 parallel 32x32->64 multiplies; hi/lo halves returned in 8x u32 layout.
inline void mulhilo8(__m256i c, std::uint32_t mul, __m256i& hi, __m256i& lo) {
    const __m256i m = _mm256_set1_epi32(static_cast<int>(mul));
    const __m256i even = _mm256_mul_epu32(c, m);
    const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(c, 32), m);
    lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0b10101010);
    hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0b10101010);
}

void philox_blocks_avx2(std::uint32_t k0, std::uint32_t k1, std::uint64_t salt,
                        std::uint64_t block0, std::size_t nblocks, std::uint32_t* out) {
    const auto s_lo = static_cast<std::uint32_t>(salt);
    const auto s_hi = static_cast<std::uint32_t>(salt >> 32);
    const __m256i w0 = _mm256_set1_epi32(static_cast<int>(kWeyl0));
    const __m256i w1 = _mm256_set1_epi32(static_cast<int>(kWeyl1));

    std::size_t i = 0;
    alignas(32) std::uint32_t lane[8];
    alignas(32) std::uint32_t res[4][8];
    for (; i + 8 <= nblocks; i += 8) {
        for (int l = 0; l < 8; ++l) lane[l] = static_cast<std::uint32_t>(block0 + i + l);
        __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lane));
        for (int l = 0; l < 8; ++l) lane[l] = static_cast<std::uint32_t>((block0 + i + l) >> 32);
        __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lane));
        __m256i c2 = _mm256_set1_epi32(static_cast<int>(s_lo));
        __m256i c3 = _mm256_set1_epi32(static_cast<int>(s_hi));
        __m256i key0 = _mm256_set1_epi32(static_cast<int>(k0));
        __m256i key1 = _mm256_set1_epi32(static_cast<int>(k1));
        for (int r = 0; r < 10; ++r) {
            __m256i hi0, lo0, hi1, lo1;
            mulhilo8(c0, kMul0, hi0, lo0);
            mulhilo8(c2, kMul1, hi1, lo1);
            const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), key0);
            const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), key1);
            c0 = n0;
            c1 = lo1;
            c2 = n2;
            c3 = lo0;
            key0 = _mm256_add_epi32(key0, w0);
            key1 = _mm256_add_epi32(key1, w1);
        }
        _mm256_store_si256(reinterpret_cast<__m256i*>(res[0]), c0);
        _mm256_store_si256(reinterpret_cast<__m256i*>(res[1]), c1);
        _mm256_store_si256(reinterpret_cast<__m256i*>(res[2]), c2);
        _mm256_store_si256(reinterpret_cast<__m256i*>(res[3]), c3);
        for (int l = 0; l < 8; ++l) {
            out[4 * (i + l) + 0] = res[0][l];
            out[4 * (i + l) + 1] = res[1][l];
            out[4 * (i + l) + 2] = res[2][l];
            out[4 * (i + l) + 3] = res[3][l];
        }
    }
    if (i < nblocks) {
        scalar_table().philox_blocks(k0, k1, salt, block0 + i, nblocks - i, out + 4 * i);
    }
}

inline double hsum4(__m256d acc) {
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d s = _mm_add_pd(lo, hi); // (acc0+acc2, acc1+acc3)
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    }
    double total = hsum4(acc);
    for (; i < n; ++i) total += x[i];
    return total;
}

double sum_sq_dev_avx2(const double* x, std::size_t n, double mean) {
    const __m256d m = _mm256_set1_pd(mean);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), m);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double total = hsum4(acc);
    for (; i < n; ++i) {
        const double d = x[i] - mean;
        total += d * d;
    }
    return total;
}

void quadform2_avx2(const double* xy, std::size_t n, double m0, double m1,
                    double a, double b, double c, double* out) {
    const __m256d vm0 = _mm256_set1_pd(m0);
    const __m256d vm1 = _mm256_set1_pd(m1);
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d p0 = _mm256_loadu_pd(xy + 2 * i);     // x0 y0 x1 y1
        const __m256d p1 = _mm256_loadu_pd(xy + 2 * i + 4); // x2 y2 x3 y3
        const __m256d xs = _mm256_unpacklo_pd(p0, p1);      // x0 x2 x1 x3
        const __m256d ys = _mm256_unpackhi_pd(p0, p1);      // y0 y2 y1 y3
        const __m256d dx = _mm256_sub_pd(xs, vm0);
        const __m256d dy = _mm256_sub_pd(ys, vm1);
        const __m256d t0 = _mm256_add_pd(_mm256_mul_pd(va, dx), _mm256_mul_pd(vb, dy));
        const __m256d t1 = _mm256_add_pd(_mm256_mul_pd(vb, dx), _mm256_mul_pd(vc, dy));
        const __m256d r = _mm256_add_pd(_mm256_mul_pd(dx, t0), _mm256_mul_pd(dy, t1));
        // lanes are (r0, r2, r1, r3); restore index order before storing
        _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(r, 0b11011000));
    }
    if (i < n) {
        scalar_table().quadform2(xy + 2 * i, n - i, m0, m1, a, b, c, out + i);
    }
}

std::size_t count_ge_avx2(const double* x, std::size_t n, double t) {
    const __m256d vt = _mm256_set1_pd(t);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(x + i), vt, _CMP_GE_OQ);
        count += static_cast<unsigned>(__builtin_popcount(_mm256_movemask_pd(cmp)));
    }
    for (; i < n; ++i) count += (x[i] >= t) ? 1u : 0u;
    return count;
}

} // namespace

const Kernels* avx2_table_or_null() {
#if defined(__GNUC__) || defined(__clang__)
    if (!__builtin_cpu_supports("avx2")) return nullptr;
#endif
    static const Kernels table{
        &philox_blocks_avx2, &sum_avx2, &sum_sq_dev_avx2, &quadform2_avx2, &count_ge_avx2,
    };
    return &table;
}

} // namespace sig::kern

#endif // x86-64
