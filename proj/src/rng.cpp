#include "sig/rng.hpp"

#include <cmath>
#include <numbers>

#include "sig/kernels.hpp"

namespace sig {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t experiment_id(const char* name) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const char* p = name; *p != '\0'; ++p) {
        h ^= static_cast<unsigned char>(*p);
        h *= 0x100000001B3ull;
    }
    return h;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t experiment, std::uint64_t trial,
                     std::uint64_t role) {
    // splitmix64 chain over the address tuple; two differently-salted
    // finalizations give the 64-bit key and the 64-bit counter salt.
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ experiment);
    h = splitmix64(h ^ trial);
    h = splitmix64(h ^ role);
    const std::uint64_t key = splitmix64(h ^ 0x243F6A8885A308D3ull);
    salt_ = splitmix64(h ^ 0x13198A2E03707344ull);
    k0_ = static_cast<std::uint32_t>(key);
    k1_ = static_cast<std::uint32_t>(key >> 32);
}

std::uint64_t RngStream::next_u64() {
    std::uint32_t words[4];
    kern::active().philox_blocks(k0_, k1_, salt_, cursor_ >> 1, 1, words);
    const unsigned half = static_cast<unsigned>(cursor_ & 1u) * 2u;
    ++cursor_;
    return static_cast<std::uint64_t>(words[half]) |
           (static_cast<std::uint64_t>(words[half + 1]) << 32);
}

void RngStream::fill_u64(std::uint64_t* out, std::size_t n) {
    std::size_t got = 0;
    if (n > 0 && (cursor_ & 1u) != 0u) {
        out[got++] = next_u64(); // finish the half-consumed block
    }
    const std::size_t whole = (n - got) / 2;
    if (whole > 0) {
        std::vector<std::uint32_t> buf(4 * whole);
        kern::active().philox_blocks(k0_, k1_, salt_, cursor_ >> 1, whole, buf.data());
        for (std::size_t b = 0; b < whole; ++b) {
            out[got + 2 * b] = static_cast<std::uint64_t>(buf[4 * b]) |
                               (static_cast<std::uint64_t>(buf[4 * b + 1]) << 32);
            out[got + 2 * b + 1] = static_cast<std::uint64_t>(buf[4 * b + 2]) |
                                   (static_cast<std::uint64_t>(buf[4 * b + 3]) << 32);
        }
        cursor_ += 2 * whole;
        got += 2 * whole;
    }
    while (got < n) out[got++] = next_u64();
}

namespace {

inline double to_unit_halfopen(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

inline double to_unit_open01(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

/// Box-Muller on a word pair: z0 from cos, z1 from sin.
inline void box_muller(std::uint64_t a, std::uint64_t b, double& z0, double& z1) {
    const double r = std::sqrt(-2.0 * std::log(to_unit_open01(a)));
    const double theta = 2.0 * std::numbers::pi * to_unit_halfopen(b);
    z0 = r * std::cos(theta);
    z1 = r * std::sin(theta);
}

} // namespace

double RngStream::uniform() { return to_unit_halfopen(next_u64()); }

double RngStream::uniform_open01() { return to_unit_open01(next_u64()); }

double RngStream::normal() {
    if (has_carry_) {
        has_carry_ = false;
        return carry_;
    }
    const std::uint64_t a = next_u64();
    const std::uint64_t b = next_u64();
    double z0, z1;
    box_muller(a, b, z0, z1);
    carry_ = z1;
    has_carry_ = true;
    return z0;
}

void RngStream::fill_normals(double* out, std::size_t n) {
    std::size_t got = 0;
    while (got < n && has_carry_) {
        has_carry_ = false;
        out[got++] = carry_;
    }
    const std::size_t pairs = (n - got + 1) / 2;
    if (pairs == 0) return;
    std::vector<std::uint64_t> words(2 * pairs);
    fill_u64(words.data(), words.size());
    for (std::size_t p = 0; p < pairs; ++p) {
        double z0, z1;
        box_muller(words[2 * p], words[2 * p + 1], z0, z1);
        out[got++] = z0;
        if (got < n) {
            out[got++] = z1;
        } else {
            carry_ = z1;
            has_carry_ = true;
        }
    }
}

std::uint64_t RngStream::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw DomainError("poisson: mean must be finite and nonnegative");
    }
    if (mean > 1e8) {
        throw Unsupported("poisson: mean too large for exponential-race sampling");
    }
    std::uint64_t k = 0;
    double s = 0.0;
    for (;;) {
        s += -std::log(uniform_open01());
        if (s > mean) return k;
        ++k;
    }
}

} // namespace sig
