#include "spikepca/rng.hpp"

#include <cmath>

namespace spikepca::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

}  // namespace

Philox::Block Philox::block(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                            std::uint32_t c3, std::uint32_t k0, std::uint32_t k1) noexcept {
    std::uint32_t x0 = c0, x1 = c1, x2 = c2, x3 = c3;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, x0, hi0, lo0);
        mulhilo(kMul1, x2, hi1, lo1);
        const std::uint32_t y0 = hi1 ^ x1 ^ k0;
        const std::uint32_t y1 = lo1;
        const std::uint32_t y2 = hi0 ^ x3 ^ k1;
        const std::uint32_t y3 = lo0;
        x0 = y0;
        x1 = y1;
        x2 = y2;
        x3 = y3;
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return {x0, x1, x2, x3};
}

void Philox::refill() noexcept {
    buf_ = block(static_cast<std::uint32_t>(counter_),
                 static_cast<std::uint32_t>(counter_ >> 32),
                 stream_lo_, stream_hi_, key_lo_, key_hi_);
    ++counter_;
    have_ = 4;
}

double Philox::normal() noexcept {
    if (have_normal_) {
        have_normal_ = false;
        return cached_normal_;
    }
    // u1 in (0,1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_normal_ = r * std::sin(a);
    have_normal_ = true;
    return r * std::cos(a);
}

double Philox::uniform_unit_variance() noexcept {
    return 1.7320508075688772935274463415059 * (2.0 * uniform() - 1.0);
}

}  // namespace spikepca::rng
