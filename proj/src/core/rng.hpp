#pragma once

#include <cmath>
#include <cstdint>
#include <array>

namespace chamber {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// Stateless: every 128-bit counter + 64-bit key maps to four independent
// 32-bit words, so parallel trajectories can draw from disjoint substreams
// without sharing any mutable state.
struct Philox4x32 {
    static constexpr uint32_t kMultA = 0xD2511F53u;
    static constexpr uint32_t kMultB = 0xCD9E8D57u;
    static constexpr uint32_t kWeylA = 0x9E3779B9u;
    static constexpr uint32_t kWeylB = 0xBB67AE85u;

    static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                         std::array<uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const uint64_t prod0 = static_cast<uint64_t>(kMultA) * ctr[0];
            const uint64_t prod1 = static_cast<uint64_t>(kMultB) * ctr[2];
            const uint32_t hi0 = static_cast<uint32_t>(prod0 >> 32);
            const uint32_t lo0 = static_cast<uint32_t>(prod0);
            const uint32_t hi1 = static_cast<uint32_t>(prod1 >> 32);
            const uint32_t lo1 = static_cast<uint32_t>(prod1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeylA;
            key[1] += kWeylB;
        }
        return ctr;
    }
};

// Gaussian substream for one trajectory.  The counter layout is
// (block-within-step, step lo, step hi, trajectory index) keyed by the
// user seed, so draws depend only on (seed, trajectory, step) and never on
// scheduling order.  Each Philox block yields two N(0,1) variates via
// Box-Muller.
class GaussianStream {
  public:
    GaussianStream(uint64_t seed, uint32_t trajectory_index)
        : key_{static_cast<uint32_t>(seed & 0xFFFFFFFFu),
               static_cast<uint32_t>(seed >> 32)},
          trajectory_(trajectory_index) {}

    // Deterministic pair of standard normals for (step, block).
    std::array<double, 2> normal_pair(uint64_t step, uint32_t block) const {
        const std::array<uint32_t, 4> ctr = {
            block, static_cast<uint32_t>(step & 0xFFFFFFFFu),
            static_cast<uint32_t>(step >> 32), trajectory_};
        const auto words = Philox4x32::block(ctr, key_);
        const double u1 = to_open_unit(words[0], words[1]);
        const double u2 = to_open_unit(words[2], words[3]);
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * kPi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    // Fill `out[0..n)` with standard normals for one step.  `block_base`
    // selects a sub-band of the step's counter space; refinement draws
    // (Brownian-bridge step splitting) use bands >= kRefinementBase so they
    // never collide with the main increments.
    void fill_normals(uint64_t step, uint32_t block_base, double* out,
                      int n) const {
        int produced = 0;
        uint32_t block = block_base;
        while (produced < n) {
            const auto pair = normal_pair(step, block++);
            out[produced++] = pair[0];
            if (produced < n) out[produced++] = pair[1];
        }
    }

    static constexpr uint32_t kRefinementBase = 1u << 20;

  private:
    static double to_open_unit(uint32_t hi, uint32_t lo) {
        const uint64_t bits = (static_cast<uint64_t>(hi) << 32) | lo;
        // 53 significant bits, shifted into (0,1): never exactly 0 or 1.
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
    }

    static constexpr double kPi = 3.14159265358979323846;

    std::array<uint32_t, 2> key_;
    uint32_t trajectory_;
};

}  // namespace chamber
