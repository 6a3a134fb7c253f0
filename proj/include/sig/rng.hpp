#pragma once

#include <cstdint>
#include <vector>

#include "sig/errors.hpp"

namespace sig {

/// Stream roles. Every random decision in the artifact draws from a stream
/// addressed by (seed, experiment, trial, role), so trials are independent
/// and order-free, and adding a consumer never shifts another one's draws.
namespace role {
inline constexpr std::uint64_t kPointCount = 1;  ///< Poisson number of points
inline constexpr std::uint64_t kPointLocations = 2;
inline constexpr std::uint64_t kThinning = 3;    ///< inhomogeneous acceptance
inline constexpr std::uint64_t kMarkMeans = 4;
inline constexpr std::uint64_t kTypicalMark = 5; ///< mark at the origin
inline constexpr std::uint64_t kRewards = 6;     ///< bandit reward noise
inline constexpr std::uint64_t kReliability = 7; ///< sensor class assignment
} // namespace role

/// Counter-based random stream (Philox4x32-10).
///
/// Substream derivation: a splitmix64 chain folds (seed, experiment, trial,
/// role) into a 64-bit key and an independent 64-bit salt; the Philox counter
/// is (block index, salt), so the stream identity is effectively 128 bits and
/// any block can be generated independently of the others. The generator is
/// stateless per block — the only mutable state is the 64-bit word cursor and
/// the Box-Muller carry — which is what makes bulk fills, single draws, and
/// SIMD generation produce identical sequences.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t experiment, std::uint64_t trial,
              std::uint64_t role);

    /// Next raw 64-bit word.
    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform();

    /// Uniform double in (0, 1] (safe under log()).
    double uniform_open01();

    /// Standard normal via Box-Muller; pairs are carried across calls.
    double normal();

    /// Fills out[0..n) with standard normals, bulk-generating the underlying
    /// uniforms through the kernel table. Identical to n sequential normal()
    /// calls on the same stream state.
    void fill_normals(double* out, std::size_t n);

    /// Exact Poisson sample by the exponential-race method: counts standard
    /// exponentials until their sum exceeds mean. O(mean) uniforms per draw,
    /// no underflow for any representable mean. Raises DomainError for a
    /// negative or non-finite mean and Unsupported above 1e8 (where an O(mean)
    /// walk stops being a sane choice).
    std::uint64_t poisson(double mean);

    /// Fills out[0..n) with raw words, bulk-generating whole Philox blocks.
    /// Identical to n sequential next_u64() calls.
    void fill_u64(std::uint64_t* out, std::size_t n);

private:
    std::uint32_t k0_, k1_;
    std::uint64_t salt_;
    std::uint64_t cursor_ = 0; // index of the next 64-bit word
    bool has_carry_ = false;
    double carry_ = 0.0;
};

/// splitmix64 finalizer used by the substream derivation (exposed for tests).
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x);

/// Stable 64-bit id for a study name (FNV-1a), so config files can address
/// experiment substreams by name.
[[nodiscard]] std::uint64_t experiment_id(const char* name);

} // namespace sig
