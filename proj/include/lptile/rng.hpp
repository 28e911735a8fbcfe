#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace lptile {

/// Deterministic random source. Wraps mt19937_64 but generates uniforms and
/// gaussians by explicit formulas so the byte stream does not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Derive an independent stream; used by batteries so that trial k does
    /// not depend on how much randomness earlier trials consumed.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(seed * 0x9e3779b97f4a7c15ULL + index + 1);
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Integer in [0, m).
    std::uint64_t below(std::uint64_t m) { return eng_() % m; }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        while (u == 0.0) u = uniform01();
        double v = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::complex<double> complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

    int sign() { return (eng_() & 1) ? 1 : -1; }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace lptile
