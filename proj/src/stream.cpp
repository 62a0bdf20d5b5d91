#include "parrondo/stream.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace parrondo {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t h, unsigned char byte) {
    return (h ^ byte) * kFnvPrime;
}

// Type tag first so "7" and 7 hash differently.
std::uint64_t label_digest(const StreamLabel& label) {
    std::uint64_t h = kFnvOffset;
    if (const auto* text = std::get_if<std::string_view>(&label)) {
        h = fnv1a(h, 0x01);
        for (char c : *text) h = fnv1a(h, static_cast<unsigned char>(c));
        h = fnv1a(h, 0xff);
    } else {
        const auto value = std::get<std::uint64_t>(label);
        h = fnv1a(h, 0x02);
        for (int shift = 0; shift < 64; shift += 8) {
            h = fnv1a(h, static_cast<unsigned char>((value >> shift) & 0xff));
        }
    }
    return h;
}

}  // namespace

double RandomStream::normal() {
    // 1 - u lies in (0, 1], keeping the log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::span<const StreamLabel> labels) {
    std::uint64_t h = splitmix64(master_seed);
    for (const auto& label : labels) {
        h = splitmix64(h ^ label_digest(label));
    }
    return h;
}

RandomStream split_stream(std::uint64_t master_seed, std::span<const StreamLabel> labels) {
    if (labels.empty()) {
        throw std::invalid_argument("split_stream: label path must be non-empty");
    }
    return RandomStream(stream_seed(master_seed, labels));
}

RandomStream split_stream(std::uint64_t master_seed, std::initializer_list<StreamLabel> labels) {
    return split_stream(master_seed, std::span<const StreamLabel>(labels.begin(), labels.size()));
}

}  // namespace parrondo
