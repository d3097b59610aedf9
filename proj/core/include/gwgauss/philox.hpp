#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The stream
// is a pure function of (seed, counter), so sampling is reproducible.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace gwgauss::oracle {

class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox4x32(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    [[nodiscard]] static Block bijection(Block ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kW0;
                key[1] += kW1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }

    /// Block number i of the stream.
    [[nodiscard]] Block block(std::uint64_t i) const noexcept {
        return bijection({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32), 0u, 0u}, key_);
    }

    /// Two uniforms in (0, 1) with 53-bit resolution from one block.
    [[nodiscard]] std::array<double, 2> uniforms(std::uint64_t i) const noexcept {
        const Block b = block(i);
        return {to_unit(b[0], b[1]), to_unit(b[2], b[3])};
    }

    /// Two independent standard normals (Box-Muller) from block i.
    [[nodiscard]] std::array<double, 2> normals(std::uint64_t i) const noexcept {
        const auto [u1, u2] = uniforms(i);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
        const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    Key key_;
};

}  // namespace gwgauss::oracle
