#pragma once

#include <array>
#include <cstdint>

namespace tomo {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The output
/// block is a pure function of (counter, key).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/// Sequential uniform stream for one (seed, stream id) pair, e.g. one ray.
/// Each Philox block yields two doubles in the open interval (0, 1).
class UniformStream {
public:
    UniformStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    double next() {
        if (slot_ == 2) refill();
        return buffer_[slot_++];
    }

private:
    static double to_open_unit(std::uint32_t a, std::uint32_t b) {
        const std::uint64_t bits = (std::uint64_t{a >> 5} << 26) | (b >> 6);
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    void refill() {
        const auto out = Philox4x32::generate({block_++, 0u, stream_lo_, stream_hi_}, key_);
        buffer_[0] = to_open_unit(out[0], out[1]);
        buffer_[1] = to_open_unit(out[2], out[3]);
        slot_ = 0;
    }

    Philox4x32::Key key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint32_t block_ = 0;
    std::array<double, 2> buffer_{};
    int slot_ = 2;
};

}  // namespace tomo
