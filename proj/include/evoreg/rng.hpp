#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace evoreg {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless:
/// every output block is a pure function of (counter, key).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept;
};

/// Independent Gaussian substream addressed by (master seed, replica, mode).
/// draw_pair(k) returns the k-th pair of standard normals of that substream.
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint32_t replica, std::uint32_t mode) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          replica_(replica),
          mode_(mode) {}

    std::pair<double, double> draw_pair(std::uint64_t index) const noexcept;

private:
    Philox4x32::Key key_;
    std::uint32_t replica_;
    std::uint32_t mode_;
};

/// 53-bit uniform in (0, 1] from two 32-bit words.
double uniform_open_closed(std::uint32_t hi, std::uint32_t lo) noexcept;

}  // namespace evoreg
