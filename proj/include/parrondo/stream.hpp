#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <span>
#include <string_view>
#include <variant>

namespace parrondo {

/**
 * Seeded random stream used everywhere randomness is consumed.
 *
 * Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
 * derives uniforms and normals with explicit formulas instead of the
 * implementation-defined <random> distributions, so a seed produces the same
 * numbers with every standard library.
 */
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Upper 32 bits of the next raw output.
    std::uint32_t next_u32() { return static_cast<std::uint32_t>(engine_() >> 32); }

    /// Standard normal deviate (Box-Muller, one deviate per two uniforms).
    double normal();

private:
    std::mt19937_64 engine_;
};

/// One component of a stream path: a text tag or an integer index.
using StreamLabel = std::variant<std::string_view, std::uint64_t>;

/// Hashes (master_seed, label path) into a 64-bit seed. The path is ordered:
/// permuting labels yields a different seed.
std::uint64_t stream_seed(std::uint64_t master_seed, std::span<const StreamLabel> labels);

/**
 * Deterministic substream keyed by (master_seed, labels).
 *
 * Stream tree used by the experiment engine:
 *   root -> rep/<i> -> hints
 *                   -> strategy/<kind>
 * plus "sawtooth" for fixture generation and games/<game>/<i> for the coin
 * games. Throws std::invalid_argument on an empty label list.
 */
RandomStream split_stream(std::uint64_t master_seed, std::span<const StreamLabel> labels);
RandomStream split_stream(std::uint64_t master_seed, std::initializer_list<StreamLabel> labels);

}  // namespace parrondo
