#pragma once

// Deterministic, platform-independent randomness.
//
// Streams: every consumer derives its own generator from a 64-bit key with
// derive_seed(parent, tag...), which folds each tag through SplitMix64. A
// generator seeded from the same key always yields the same sequence, and no
// std:: distribution is used, so results do not depend on the standard
// library implementation.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace mqubo {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept { return splitmix64(x); }

// FNV-1a, used to turn string tags into stream keys.
inline constexpr std::uint64_t hash_tag(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline constexpr std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t s = mix64(parent);
    for (const std::uint64_t t : tags) s = mix64(s ^ mix64(t + 0x632be59bd9b4e019ULL));
    return s;
}

inline constexpr std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag,
                                           std::initializer_list<std::uint64_t> tags = {}) noexcept {
    return derive_seed(derive_seed(parent, {hash_tag(tag)}), tags);
}

// xoshiro256** 1.0 (Blackman and Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = std::rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1], safe for log().
    double uniform_positive() noexcept { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by Lemire's multiply-and-reject method.
    std::uint64_t below(std::uint64_t bound) noexcept {
        __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<__uint128_t>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    // Beta(a, b) by Johnk's rejection method, evaluated in log space so that
    // small shape parameters do not underflow. Intended for a, b < 1.
    double beta_johnk(double a, double b) noexcept {
        for (;;) {
            const double log_x = std::log(uniform_positive()) / a;
            const double log_y = std::log(uniform_positive()) / b;
            const double hi = std::max(log_x, log_y);
            const double log_sum = hi + std::log(std::exp(log_x - hi) + std::exp(log_y - hi));
            if (log_sum <= 0.0) {
                if (!std::isfinite(log_sum)) continue;
                return std::exp(log_x - log_sum);
            }
        }
    }

private:
    std::uint64_t s_[4];
};

}  // namespace mqubo
