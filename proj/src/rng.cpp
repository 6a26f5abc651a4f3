#include "delaybs/rng.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>

namespace dbs {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline Philox4x32::Block round(const Philox4x32::Block& c, const Philox4x32::Key& k) noexcept {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Block Philox4x32::generate(Block counter, Key key) noexcept {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        counter = round(counter, key);
    }
    return counter;
}

double uniform_from_bits(std::uint32_t hi, std::uint32_t lo) noexcept {
    // 52 bits so that bits + 0.5 is exact and the result stays below 1.
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 12;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

double inverse_norm_cdf(double u) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u); }

double BrownianSpec::normal(std::uint32_t index, std::uint32_t lane) const {
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const Philox4x32::Block ctr{index, lane, static_cast<std::uint32_t>(stream_id),
                                static_cast<std::uint32_t>(stream_id >> 32)};
    const auto out = Philox4x32::generate(ctr, key);
    return inverse_norm_cdf(uniform_from_bits(out[0], out[1]));
}

}  // namespace dbs
