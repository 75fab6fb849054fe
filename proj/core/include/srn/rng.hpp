#pragma once
// Counter-based Philox4x32-10 generator: reproducible parallel streams keyed
// by (seed, stream id), one independent stream per walker.

#include <array>
#include <cmath>
#include <cstdint>

namespace srn {

struct Philox4x32 {
    static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                         std::array<uint32_t, 2> key) {
        constexpr uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
        constexpr uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            const uint64_t p0 = uint64_t(M0) * ctr[0];
            const uint64_t p1 = uint64_t(M1) * ctr[2];
            const std::array<uint32_t, 4> next{
                uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], uint32_t(p1),
                uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], uint32_t(p0)};
            ctr = next;
            key[0] += W0;
            key[1] += W1;
        }
        return ctr;
    }
};

class PhiloxRng {
  public:
    PhiloxRng(uint64_t seed, uint64_t stream)
        : key_{uint32_t(seed), uint32_t(seed >> 32)},
          ctr_{0, 0, uint32_t(stream), uint32_t(stream >> 32)}, have_(0) {}

    uint32_t u32() {
        if (have_ == 0) {
            buf_ = Philox4x32::block(ctr_, key_);
            have_ = 4;
            if (++ctr_[0] == 0) ++ctr_[1];
        }
        return buf_[--have_];
    }

    double uniform() {  // in [0, 1)
        const uint64_t hi = u32(), lo = u32();
        return double(((hi << 32) | lo) >> 11) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    // uniform direction on the sphere
    std::pair<double, double> sphere() {
        const double ct = 2.0 * uniform() - 1.0;
        const double ph = 2.0 * M_PI * uniform();
        return {std::acos(ct), ph};
    }

  private:
    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 4> ctr_;
    std::array<uint32_t, 4> buf_{};
    int have_;
};

}  // namespace srn
