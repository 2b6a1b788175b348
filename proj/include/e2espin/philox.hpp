#pragma once

#include <array>
#include <cstdint>

namespace e2espin {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
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
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

    static Key key_from_seed(std::uint64_t seed) {
        return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    }
};

// Stream of uniform doubles in (0, 1) for one (seed, index, stream) triple.
// Counter layout: (index lo, index hi, stream, block).
class UniformStream {
public:
    UniformStream(std::uint64_t seed, std::uint64_t index, std::uint32_t stream = 0)
        : key_(Philox4x32::key_from_seed(seed)),
          ctr_{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream, 0} {}

    double next() {
        if (pos_ == 2) refill();
        return buf_[pos_++];
    }

private:
    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits = ((std::uint64_t{hi} << 32) | lo) >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    void refill() {
        const auto out = Philox4x32::generate(ctr_, key_);
        ++ctr_[3];
        buf_[0] = to_unit(out[0], out[1]);
        buf_[1] = to_unit(out[2], out[3]);
        pos_ = 0;
    }

    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    double buf_[2] = {0.0, 0.0};
    int pos_ = 2;
};

// SplitMix64 finalizer; derives child seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace e2espin
