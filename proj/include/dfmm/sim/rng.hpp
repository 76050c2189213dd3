#pragma once

// Portable random streams. The engine's generator is std::mt19937_64, whose
// output sequence is fixed by the standard; the transforms below are written
// out so distributions do not depend on the standard library vendor.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace dfmm::sim {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    // [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(th);
        has_spare_ = true;
        return r * std::cos(th);
    }

    std::int64_t poisson(double lambda) {
        if (!(lambda > 0.0)) return 0;
        if (lambda > 50.0) {
            auto k = static_cast<std::int64_t>(std::llround(lambda + std::sqrt(lambda) * normal()));
            return k < 0 ? 0 : k;
        }
        double limit = std::exp(-lambda);
        double p = 1.0;
        std::int64_t k = 0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n; }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace dfmm::sim
