#ifndef HOMF_PHILOX_HPP
#define HOMF_PHILOX_HPP

#include <array>
#include <cstdint>

namespace homf::rng {

// Philox4x32-10 counter-based generator. A (key, counter) pair maps to four
// 32-bit words with no carried state, so independent streams keyed by
// (seed, stream) stay reproducible under any evaluation order.
struct Philox4x32 {
    using counter_type = std::array<std::uint32_t, 4>;
    using key_type = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static counter_type block(counter_type ctr, key_type key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }
};

// Uniform-double stream over one (seed, stream_id) pair. Each Philox block
// yields two doubles with 53 random mantissa bits in [0, 1).
class UniformStream {
public:
    UniformStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_id_(stream_id) {}

    double next() {
        if (cursor_ == 0) refill();
        const double u = buffer_[2 - cursor_];
        --cursor_;
        return u;
    }

private:
    void refill() {
        const Philox4x32::counter_type ctr = {
            static_cast<std::uint32_t>(block_),
            static_cast<std::uint32_t>(block_ >> 32),
            static_cast<std::uint32_t>(stream_id_),
            static_cast<std::uint32_t>(stream_id_ >> 32)};
        const auto words = Philox4x32::block(ctr, key_);
        buffer_[0] = to_unit(words[0], words[1]);
        buffer_[1] = to_unit(words[2], words[3]);
        ++block_;
        cursor_ = 2;
    }

    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits =
            ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
        return static_cast<double>(bits) * 0x1.0p-53;
    }

    Philox4x32::key_type key_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    double buffer_[2] = {0.0, 0.0};
    int cursor_ = 0;
};

}  // namespace homf::rng

#endif
