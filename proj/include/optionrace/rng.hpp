// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace optionrace::sim {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123). A block
/// of 128 random bits is a pure function of (counter, key), so any draw of any
/// path can be regenerated without replaying earlier draws.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept;
};

/// Independent sub-streams of a path. Each purpose owns its own counter space.
enum class StreamPurpose : std::uint32_t {
    Increments = 0,  ///< Brownian increments
    TieBreak = 1,    ///< deployer coin
    Alignment = 2,   ///< alignment lottery
    Bridge = 3,      ///< Brownian-bridge crossing draws
};

/// Uniform draws in the open interval (0, 1) for one (seed, path, purpose).
class UniformStream {
public:
    UniformStream(std::uint64_t seed, std::uint64_t path_index, StreamPurpose purpose) noexcept;

    /// The index-th draw of the stream.
    double at(std::uint64_t index) const noexcept;

    double next() noexcept { return at(position_++); }

private:
    Philox4x32::Key key_;
    std::uint64_t path_index_;
    std::uint32_t purpose_;
    std::uint64_t position_ = 0;
};

/// Standard normal draws (Box-Muller, two per Philox block) for one
/// (seed, path, purpose). Sequential access reuses the cached block.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t path_index,
                 StreamPurpose purpose = StreamPurpose::Increments) noexcept;

    double next() noexcept;

private:
    Philox4x32::Key key_;
    std::uint64_t path_index_;
    std::uint32_t purpose_;
    std::uint64_t block_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace optionrace::sim
