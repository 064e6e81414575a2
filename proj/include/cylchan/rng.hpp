#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace cylchan {

/// Philox 4x32-10 counter-based generator. Stateless: every 128-bit counter
/// and 64-bit key pair maps to four independent 32-bit words, so streams can
/// be indexed by (realization, particle, step, call) and drawn from any thread
/// in any order with identical results.
struct Philox4x32 {
    static constexpr uint32_t kW32A = 0x9E3779B9u;
    static constexpr uint32_t kW32B = 0xBB67AE85u;
    static constexpr uint32_t kM4x32A = 0xD2511F53u;
    static constexpr uint32_t kM4x32B = 0xCD9E8D57u;

    static std::array<uint32_t, 4> block(uint64_t key, uint32_t c0, uint32_t c1, uint32_t c2,
                                         uint32_t c3) {
        uint32_t k0 = static_cast<uint32_t>(key);
        uint32_t k1 = static_cast<uint32_t>(key >> 32);
        uint32_t x0 = c0, x1 = c1, x2 = c2, x3 = c3;
        for (int round = 0; round < 10; ++round) {
            const uint64_t p0 = static_cast<uint64_t>(kM4x32A) * x0;
            const uint64_t p1 = static_cast<uint64_t>(kM4x32B) * x2;
            const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
            const uint32_t lo0 = static_cast<uint32_t>(p0);
            const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
            const uint32_t lo1 = static_cast<uint32_t>(p1);
            const uint32_t y0 = hi1 ^ x1 ^ k0;
            const uint32_t y1 = lo1;
            const uint32_t y2 = hi0 ^ x3 ^ k1;
            const uint32_t y3 = lo0;
            x0 = y0;
            x1 = y1;
            x2 = y2;
            x3 = y3;
            k0 += kW32A;
            k1 += kW32B;
        }
        return {x0, x1, x2, x3};
    }
};

/// Uniform double in [0, 1) from two 32-bit words (53 mantissa bits).
inline double u01(uint32_t hi, uint32_t lo) {
    const uint64_t v = (static_cast<uint64_t>(hi) << 32) | lo;
    return static_cast<double>(v >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1] (safe as a logarithm argument).
inline double u01_open(uint32_t hi, uint32_t lo) {
    const uint64_t v = (static_cast<uint64_t>(hi) << 32) | lo;
    return (static_cast<double>(v >> 11) + 1.0) * 0x1.0p-53;
}

/// Two standard normal deviates from one Philox block (Box-Muller).
inline void gaussian_pair(const std::array<uint32_t, 4>& w, double& g0, double& g1) {
    const double u1 = u01_open(w[0], w[1]);
    const double u2 = u01(w[2], w[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    g0 = r * std::cos(2.0 * M_PI * u2);
    g1 = r * std::sin(2.0 * M_PI * u2);
}

} // namespace cylchan
