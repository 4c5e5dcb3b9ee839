#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tqsync {

/// Counter-based random stream addressed by (master seed, label path).
///
/// Sample i of a stream is a pure function of its key and i, so a stream can
/// be handed to any worker without changing what it produces. Child streams
/// are derived by hashing a (name, index) label into the key; sibling labels
/// give independent sequences.
class RngStream {
public:
    explicit RngStream(std::uint64_t master_seed);

    RngStream child(std::string_view name, std::uint64_t index = 0) const;

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t key() const { return key_; }
    std::uint64_t position() const { return counter_; }
    /// Human readable label path, e.g. "/sweep#3/run#17".
    const std::string &path() const { return path_; }

private:
    RngStream(std::uint64_t master_seed, std::uint64_t key, std::string path);

    std::uint64_t master_seed_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::string path_;
};

/// SplitMix64 output finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xCBF29CE484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace tqsync
