// SPDX-License-Identifier: Apache-2.0
#include "optionrace/rng.hpp"

#include <cmath>
#include <numbers>

namespace optionrace::sim {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

Philox4x32::Key key_from_seed(std::uint64_t seed) noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// Counter layout: word 0/1 hold the block index (56 bits) with the purpose in
// the top byte of word 1; words 2/3 hold the path index.
Philox4x32::Counter make_counter(std::uint64_t block, std::uint32_t purpose,
                                 std::uint64_t path_index) noexcept {
    return {static_cast<std::uint32_t>(block),
            (purpose << 24) | (static_cast<std::uint32_t>(block >> 32) & 0x00FFFFFFu),
            static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(path_index >> 32)};
}

// 53 high bits mapped to the open interval (0, 1).
inline double to_unit_open(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline std::uint64_t join(std::uint32_t lo, std::uint32_t hi) noexcept {
    return static_cast<std::uint64_t>(lo) | (static_cast<std::uint64_t>(hi) << 32);
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

UniformStream::UniformStream(std::uint64_t seed, std::uint64_t path_index,
                             StreamPurpose purpose) noexcept
    : key_(key_from_seed(seed)), path_index_(path_index), purpose_(static_cast<std::uint32_t>(purpose)) {}

double UniformStream::at(std::uint64_t index) const noexcept {
    const auto out = Philox4x32::generate(make_counter(index / 2, purpose_, path_index_), key_);
    return (index % 2 == 0) ? to_unit_open(join(out[0], out[1])) : to_unit_open(join(out[2], out[3]));
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t path_index, StreamPurpose purpose) noexcept
    : key_(key_from_seed(seed)), path_index_(path_index), purpose_(static_cast<std::uint32_t>(purpose)) {}

double NormalStream::next() noexcept {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const auto out = Philox4x32::generate(make_counter(block_++, purpose_, path_index_), key_);
    const double u1 = to_unit_open(join(out[0], out[1]));
    const double u2 = to_unit_open(join(out[2], out[3]));
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

}  // namespace optionrace::sim
