#ifndef MAXKIN_RNG_HPP
#define MAXKIN_RNG_HPP

#include <cstdint>
#include <cmath>
#include <random>
#include <string_view>
#include <vector>

namespace maxkin {

// splitmix64; used only to derive substream seeds from a root seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Deterministic substream seed: root seed + stream tag + index.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view tag, std::uint64_t index = 0) {
    std::uint64_t s = root ^ fnv1a64(tag);
    splitmix64(s);
    s ^= 0x5851f42d4c957f2dULL * (index + 1);
    std::uint64_t s2 = s;
    return splitmix64(s2);
}

// All sampling goes through explicit draws from mt19937_64 so that a given
// (platform, seed) pair reproduces trajectories bit for bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    // uniform in [0,1) with 53 random bits
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // uniform in {0,...,n-1}
    std::size_t uniform_index(std::size_t n) {
        // rejection-free modulo bias is negligible for n << 2^64, but stay exact anyway
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x > limit);
        return static_cast<std::size_t>(x % n);
    }

    // Marsaglia polar method
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    double exponential(double mean = 1.0) { return -mean * std::log1p(-uniform01()); }

    // Poisson: Knuth product for small mean, PTRS transformed rejection (Hormann) otherwise.
    std::uint64_t poisson(double mean);

    // Marsaglia-Tsang; valid for shape >= 1 which is all this project needs.
    double gamma(double shape);

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace maxkin

#endif
