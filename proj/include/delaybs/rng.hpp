#pragma once

#include <array>
#include <cstdint>

namespace dbs {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
// Output is a pure function of (key, counter), so streams never depend on call order.
struct Philox4x32 {
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block generate(Block counter, Key key) noexcept;
};

// Open-interval uniform in (0, 1) built from 52 random bits.
double uniform_from_bits(std::uint32_t hi, std::uint32_t lo) noexcept;

// Standard normal quantile Phi^{-1}(u) for u in (0, 1).
double inverse_norm_cdf(double u);

// Brownian driver of one path: every standard-normal draw is addressed by
// (seed, stream_id, index, lane) and generated independently of all others.
struct BrownianSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    double normal(std::uint32_t index, std::uint32_t lane = 0) const;
};

}  // namespace dbs
