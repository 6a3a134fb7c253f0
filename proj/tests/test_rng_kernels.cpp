// Counter-based generator and the data-parallel kernel table.
//
// The Philox core is pinned to an external ground truth: the frozen vectors
// below are the first 16 outputs of TensorFlow 2.21's stateless Philox
// composition for five (seed0, seed1) pairs. A from-scratch reference
// implementation in this file reproduces them, and the library's kernel
// (every backend) must match the same composition bit for bit.
#include "doctest.h"

#include "sig/kernels.hpp"
#include "sig/rng.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

using namespace sig;

namespace {

// ---- independent Philox4x32-10 reference (test-local) ----------------------

struct Counter {
    std::uint32_t c0, c1, c2, c3;
};

Counter philox_round(Counter c, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = 0xD2511F53ull * c.c0;
    const std::uint64_t p1 = 0xCD9E8D57ull * c.c2;
    return {static_cast<std::uint32_t>((p1 >> 32) ^ c.c1 ^ k0),
            static_cast<std::uint32_t>(p1),
            static_cast<std::uint32_t>((p0 >> 32) ^ c.c3 ^ k1),
            static_cast<std::uint32_t>(p0)};
}

Counter reference_philox_block(Counter c, std::uint32_t k0, std::uint32_t k1) {
    for (int r = 0; r < 10; ++r) {
        c = philox_round(c, k0, k1);
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    return c;
}

/// The stateless composition: one block with a fixed key mixes the two seed
/// words; the mix becomes (key, counter salt) of the output stream.
std::array<std::uint32_t, 16> reference_two_stage(std::uint64_t seed0,
                                                  std::uint64_t seed1) {
    const Counter mix = reference_philox_block(
        {static_cast<std::uint32_t>(seed0), static_cast<std::uint32_t>(seed0 >> 32),
         static_cast<std::uint32_t>(seed1), static_cast<std::uint32_t>(seed1 >> 32)},
        0x3EC8F720u, 0x02461E29u);
    std::array<std::uint32_t, 16> out{};
    for (std::uint32_t blk = 0; blk < 4; ++blk) {
        const Counter b = reference_philox_block({blk, 0u, mix.c2, mix.c3}, mix.c0, mix.c1);
        out[4 * blk + 0] = b.c0;
        out[4 * blk + 1] = b.c1;
        out[4 * blk + 2] = b.c2;
        out[4 * blk + 3] = b.c3;
    }
    return out;
}

/// Same composition through a kernel table.
std::array<std::uint32_t, 16> kernel_two_stage(const kern::Kernels& k,
                                               std::uint64_t seed0, std::uint64_t seed1) {
    std::uint32_t mix[4];
    k.philox_blocks(0x3EC8F720u, 0x02461E29u, seed1, seed0, 1, mix);
    std::array<std::uint32_t, 16> out{};
    const std::uint64_t salt =
        static_cast<std::uint64_t>(mix[2]) | (static_cast<std::uint64_t>(mix[3]) << 32);
    k.philox_blocks(mix[0], mix[1], salt, 0, 4, out.data());
    return out;
}

struct KatRow {
    std::uint64_t seed0, seed1;
    std::array<std::uint32_t, 16> words;
};

// Frozen ground truth (TensorFlow 2.21 stateless Philox outputs).
const KatRow kKat[] = {
    {0x0000000000000000ull, 0x0000000000000000ull,
     {0xe79b028eu, 0xa0da5e89u, 0x4de6687au, 0xabe2a952u, 0x2131bd46u, 0x5bef67f0u,
      0xcbe772b0u, 0x8319355cu, 0xf7ecb4e7u, 0x5745247du, 0xe8916b3cu, 0x758e3bb3u,
      0xea5fa0e1u, 0x74994348u, 0xf52dca90u, 0x69c29922u}},
    {0x0000000000000001ull, 0x0000000000000000ull,
     {0xe770724du, 0x98bae0a2u, 0xfeccd658u, 0xebb240a4u, 0x4d2068a3u, 0xf9b8deccu,
      0x2cabe496u, 0x83636372u, 0x9885c6aau, 0x78e8a014u, 0xa9800e91u, 0xed3d639cu,
      0x123f9932u, 0x9c1ce791u, 0x02f5ce95u, 0x4731876du}},
    {0x0000000000000000ull, 0x0000000000000001ull,
     {0xc30a846bu, 0x2ab4634au, 0x44b253e0u, 0x9ea87afdu, 0x7dac7052u, 0xfd5db207u,
      0x284826ffu, 0x8cfd0bc0u, 0x26c6b655u, 0xc110c504u, 0xa1a5a72du, 0x95c1aadbu,
      0xdeb1e40eu, 0x5e677ebeu, 0x214d51bbu, 0x4b8d715cu}},
    {0x123456789abcdef0ull, 0x0fedcba987654321ull,
     {0x730fb839u, 0xc0ecc3f6u, 0x5db2cee0u, 0x18a45b68u, 0x52f97c0bu, 0xdab183b6u,
      0xae2fa662u, 0xb81920cbu, 0x17b44c32u, 0x290ecc86u, 0x4318cc91u, 0xcbaaa5d1u,
      0xa4d0f4a5u, 0x972040b3u, 0x9311c8ceu, 0x46930349u}},
    {0x000000000000002aull, 0x0000000000000007ull,
     {0xcfce62c2u, 0x8576eb90u, 0x0eeab1f4u, 0xccd934b0u, 0xf3709f75u, 0x57beb273u,
      0xff395391u, 0x0337e8dcu, 0x57a3f9b6u, 0x7297d88cu, 0xd86726deu, 0xfb1931aeu,
      0xb99eb1ebu, 0xa1875d35u, 0x69de4c5eu, 0x11da37bdu}},
};

} // namespace

TEST_CASE("Philox core matches the frozen external vectors") {
    for (const KatRow& row : kKat) {
        CHECK(reference_two_stage(row.seed0, row.seed1) == row.words);
        CHECK(kernel_two_stage(kern::scalar_table(), row.seed0, row.seed1) == row.words);
        if (const kern::Kernels* avx2 = kern::avx2_table_or_null()) {
            CHECK(kernel_two_stage(*avx2, row.seed0, row.seed1) == row.words);
        }
    }
}

TEST_CASE("kernel block generator agrees with the reference across counters") {
    // Includes a block index that carries into the high counter word.
    const std::uint64_t block0s[] = {0ull, 1ull, 0xFFFFFFFFull, 0x1FFFFFFFEull,
                                     0xABCDEF0123ull};
    const std::uint64_t salts[] = {0ull, 0xDEADBEEFCAFEF00Dull,
                                   0xFFFFFFFFFFFFFFFFull};
    const kern::Kernels* avx2 = kern::avx2_table_or_null();
    for (const std::uint64_t b0 : block0s) {
        for (const std::uint64_t salt : salts) {
            constexpr std::size_t n = 7; // odd count exercises the tail path
            std::vector<std::uint32_t> got(4 * n);
            kern::scalar_table().philox_blocks(0x12345678u, 0x9ABCDEF0u, salt, b0, n,
                                               got.data());
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint64_t blk = b0 + i;
                const Counter c = reference_philox_block(
                    {static_cast<std::uint32_t>(blk),
                     static_cast<std::uint32_t>(blk >> 32),
                     static_cast<std::uint32_t>(salt),
                     static_cast<std::uint32_t>(salt >> 32)},
                    0x12345678u, 0x9ABCDEF0u);
                CHECK(got[4 * i + 0] == c.c0);
                CHECK(got[4 * i + 1] == c.c1);
                CHECK(got[4 * i + 2] == c.c2);
                CHECK(got[4 * i + 3] == c.c3);
            }
            if (avx2 != nullptr) {
                std::vector<std::uint32_t> simd(4 * n);
                avx2->philox_blocks(0x12345678u, 0x9ABCDEF0u, salt, b0, n, simd.data());
                CHECK(simd == got);
            }
        }
    }
}

TEST_CASE("reduction kernels: backends are bit-identical, values correct") {
    const kern::Kernels& scalar = kern::scalar_table();
    const kern::Kernels* avx2 = kern::avx2_table_or_null();

    // Deterministic but irregular data, sizes around the 4-lane boundaries.
    for (const std::size_t n : {0u, 1u, 3u, 4u, 5u, 8u, 127u, 1024u, 100003u}) {
        RngStream gen(7, 11, 13, 17);
        std::vector<double> x(n);
        gen.fill_normals(x.data(), n);
        for (std::size_t i = 0; i < n; i += 97) {
            x[i] *= 1e6; // a few large entries stress the summation order
        }

        const double s = scalar.sum(x.data(), n);
        const double dev = scalar.sum_sq_dev(x.data(), n, 0.25);
        const std::size_t ge = scalar.count_ge(x.data(), n, 0.0);

        long double naive_sum = 0.0L, naive_dev = 0.0L, magnitude = 0.0L;
        std::size_t naive_ge = 0;
        for (const double v : x) {
            naive_sum += v;
            magnitude += std::abs(v);
            naive_dev += (static_cast<long double>(v) - 0.25L) *
                         (static_cast<long double>(v) - 0.25L);
            naive_ge += (v >= 0.0) ? 1 : 0;
        }
        // The sum can cancel to near zero, so its tolerance follows the
        // magnitude actually added, not the result.
        CHECK(std::abs(s - static_cast<double>(naive_sum)) <=
              1e-9 * (1.0 + static_cast<double>(magnitude)));
        CHECK(dev == doctest::Approx(static_cast<double>(naive_dev)).epsilon(1e-9));
        CHECK(ge == naive_ge);

        if (avx2 != nullptr) {
            CHECK(avx2->sum(x.data(), n) == s);
            CHECK(avx2->sum_sq_dev(x.data(), n, 0.25) == dev);
            CHECK(avx2->count_ge(x.data(), n, 0.0) == ge);
        }
    }
}

TEST_CASE("count_ge never counts NaN") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> x = {1.0, nan, -2.0, nan, 3.0};
    CHECK(kern::scalar_table().count_ge(x.data(), x.size(), -5.0) == 3);
    if (const kern::Kernels* avx2 = kern::avx2_table_or_null()) {
        CHECK(avx2->count_ge(x.data(), x.size(), -5.0) == 3);
    }
}

TEST_CASE("quadform2 kernel computes the centered quadratic form") {
    constexpr std::size_t n = 1001;
    RngStream gen(3, 1, 4, 1);
    std::vector<double> xy(2 * n), out(n), simd(n);
    gen.fill_normals(xy.data(), xy.size());
    const double m0 = 0.3, m1 = -0.7, a = 2.0, b = 0.4, c = 1.0;
    kern::scalar_table().quadform2(xy.data(), n, m0, m1, a, b, c, out.data());
    for (const std::size_t i : {std::size_t{0}, std::size_t{500}, n - 1}) {
        const double dx = xy[2 * i] - m0, dy = xy[2 * i + 1] - m1;
        const double expect = a * dx * dx + 2.0 * b * dx * dy + c * dy * dy;
        CHECK(out[i] == doctest::Approx(expect).epsilon(1e-12));
    }
    if (const kern::Kernels* avx2 = kern::avx2_table_or_null()) {
        avx2->quadform2(xy.data(), n, m0, m1, a, b, c, simd.data());
        CHECK(simd == out);
    }
}

TEST_CASE("backend dispatch is introspectable and forceable") {
    const kern::Backend initial = kern::active_backend();
    CHECK(kern::active().sum != nullptr);
    kern::set_backend(kern::Backend::Scalar);
    CHECK(kern::active_backend() == kern::Backend::Scalar);
    if (kern::avx2_supported()) {
        CHECK(kern::avx2_table_or_null() != nullptr);
        kern::set_backend(kern::Backend::Avx2);
        CHECK(kern::active_backend() == kern::Backend::Avx2);
    } else {
        CHECK_THROWS_AS(kern::set_backend(kern::Backend::Avx2), Unsupported);
    }
    kern::set_backend(initial);
}

TEST_CASE("hash helpers match their public test vectors") {
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFull);
    CHECK(splitmix64(1) == 0x910A2DEC89025CC1ull);
    CHECK(splitmix64(0x9E3779B97F4A7C15ull) == 0x6E789E6AA1B965F4ull);
    CHECK(experiment_id("") == 0xCBF29CE484222325ull);
    CHECK(experiment_id("a") == 0xAF63DC4C8601EC8Cull);
    CHECK(experiment_id("tail transport") != experiment_id("tail information"));
}

TEST_CASE("streams reproduce exactly and separate on every address part") {
    const auto take = [](RngStream s) {
        std::array<std::uint64_t, 4> w{};
        for (auto& v : w) v = s.next_u64();
        return w;
    };
    const auto base = take(RngStream(1, 2, 3, 4));
    CHECK(take(RngStream(1, 2, 3, 4)) == base);
    CHECK(take(RngStream(2, 2, 3, 4)) != base);
    CHECK(take(RngStream(1, 3, 3, 4)) != base);
    CHECK(take(RngStream(1, 2, 4, 4)) != base);
    CHECK(take(RngStream(1, 2, 3, 5)) != base);
    // Swapping trial and role must not alias.
    CHECK(take(RngStream(1, 2, 4, 3)) != take(RngStream(1, 2, 3, 4)));
}

TEST_CASE("bulk word fills equal sequential draws from any cursor phase") {
    for (const std::size_t lead : {0u, 1u, 2u, 3u}) {
        RngStream a(9, 8, 7, 6);
        RngStream b(9, 8, 7, 6);
        for (std::size_t i = 0; i < lead; ++i) {
            CHECK(a.next_u64() == b.next_u64());
        }
        std::vector<std::uint64_t> bulk(11);
        a.fill_u64(bulk.data(), bulk.size());
        for (const std::uint64_t w : bulk) {
            CHECK(w == b.next_u64());
        }
        CHECK(a.next_u64() == b.next_u64()); // still aligned afterwards
    }
}

TEST_CASE("bulk normal fills equal sequential draws across carry states") {
    for (const std::size_t lead : {0u, 1u, 2u, 3u}) {
        for (const std::size_t n : {1u, 2u, 5u, 8u}) {
            RngStream a(5, 4, 3, 2);
            RngStream b(5, 4, 3, 2);
            for (std::size_t i = 0; i < lead; ++i) {
                CHECK(a.normal() == b.normal());
            }
            std::vector<double> bulk(n);
            a.fill_normals(bulk.data(), n);
            for (const double z : bulk) {
                CHECK(z == b.normal());
            }
            CHECK(a.normal() == b.normal());
        }
    }
}

TEST_CASE("uniform variants respect their ranges and moments") {
    RngStream s(2024, 1, 0, 1);
    constexpr std::size_t n = 100000;
    double sum = 0.0, sumsq = 0.0;
    double lo = 1.0, hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = s.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
        sumsq += u * u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 4.0 / std::sqrt(12.0 * n));
    CHECK(std::abs(var - 1.0 / 12.0) < 0.002);
    CHECK(lo < 0.01); // the range is actually exercised
    CHECK(hi > 0.99);

    RngStream t(2024, 1, 0, 2);
    for (std::size_t i = 0; i < 10000; ++i) {
        const double u = t.uniform_open01();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("uniform output passes a fixed-seed equidistribution check") {
    RngStream s(77, 3, 1, 4);
    constexpr std::size_t n = 160000;
    constexpr int bins = 16;
    std::array<std::size_t, bins> counts{};
    for (std::size_t i = 0; i < n; ++i) {
        const auto b = static_cast<int>(s.uniform() * bins);
        counts[static_cast<std::size_t>(b)]++;
    }
    const double expect = static_cast<double>(n) / bins;
    double chi2 = 0.0;
    for (const std::size_t c : counts) {
        const double d = static_cast<double>(c) - expect;
        chi2 += d * d / expect;
    }
    // 15 degrees of freedom; 37.70 is the 0.1% point. Deterministic seed.
    CHECK(chi2 < 37.70);
}

TEST_CASE("normal output has the right first moments") {
    RngStream s(31337, 2, 5, 4);
    constexpr std::size_t n = 200000;
    std::vector<double> z(n);
    s.fill_normals(z.data(), n);
    const double mean = kern::active().sum(z.data(), n) / n;
    const double var = kern::active().sum_sq_dev(z.data(), n, mean) / (n - 1);
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / static_cast<double>(n)));
    // Symmetry: both tails populated.
    const std::size_t above2 = kern::active().count_ge(z.data(), n, 2.0);
    const double p2 = static_cast<double>(above2) / n;
    CHECK(p2 == doctest::Approx(0.02275).epsilon(0.08));
}

TEST_CASE("poisson sampling matches the exact pmf at a small mean") {
    RngStream s(99, 6, 2, 1);
    constexpr std::size_t n = 200000;
    constexpr double mean = 3.0;
    std::array<std::size_t, 11> counts{}; // 0..9 and a tail bucket
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t k = s.poisson(mean);
        counts[std::min<std::uint64_t>(k, 10)]++;
        total += static_cast<double>(k);
    }
    CHECK(total / n == doctest::Approx(mean).epsilon(0.01));

    double pmf = std::exp(-mean); // P(0)
    double chi2 = 0.0, tail = 1.0;
    for (int k = 0; k < 10; ++k) {
        const double expect = pmf * n;
        const double d = static_cast<double>(counts[static_cast<std::size_t>(k)]) - expect;
        chi2 += d * d / expect;
        tail -= pmf;
        pmf *= mean / (k + 1);
    }
    const double tail_expect = tail * n;
    const double dt = static_cast<double>(counts[10]) - tail_expect;
    chi2 += dt * dt / tail_expect;
    // 10 degrees of freedom; 29.59 is the 0.1% point. Deterministic seed.
    CHECK(chi2 < 29.59);
}

TEST_CASE("poisson domain handling") {
    RngStream s(1, 1, 1, 1);
    CHECK(s.poisson(0.0) == 0);
    CHECK_THROWS_AS((void)s.poisson(-1.0), DomainError);
    CHECK_THROWS_AS((void)s.poisson(std::numeric_limits<double>::quiet_NaN()),
                    DomainError);
    CHECK_THROWS_AS((void)s.poisson(std::numeric_limits<double>::infinity()),
                    DomainError);
    CHECK_THROWS_AS((void)s.poisson(2e8), Unsupported);
}

TEST_CASE("backend switch does not change stream output") {
    if (!kern::avx2_supported()) {
        return; // single-backend machine: nothing to compare
    }
    const kern::Backend initial = kern::active_backend();
    kern::set_backend(kern::Backend::Scalar);
    RngStream a(42, 7, 9, 3);
    std::vector<double> za(257);
    a.fill_normals(za.data(), za.size());

    kern::set_backend(kern::Backend::Avx2);
    RngStream b(42, 7, 9, 3);
    std::vector<double> zb(257);
    b.fill_normals(zb.data(), zb.size());

    kern::set_backend(initial);
    CHECK(za == zb);
}
