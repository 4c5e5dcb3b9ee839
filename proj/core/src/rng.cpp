#include "tqsync/rng.hpp"

#include <utility>

namespace tqsync {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

RngStream::RngStream(std::uint64_t master_seed) : RngStream(master_seed, mix64(master_seed ^ kGolden), "") {}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t key, std::string path)
    : master_seed_(master_seed), key_(key), path_(std::move(path)) {}

RngStream RngStream::child(std::string_view name, std::uint64_t index) const {
    std::uint64_t k = mix64(key_ ^ fnv1a64(name));
    k = mix64(k + (index + 1) * kGolden);
    std::string p = path_;
    p += '/';
    p += name;
    p += '#';
    p += std::to_string(index);
    return RngStream(master_seed_, k, std::move(p));
}

std::uint64_t RngStream::next_u64() {
    std::uint64_t c = counter_++;
    return mix64(key_ + mix64(c * kGolden + 1));
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

}  // namespace tqsync
