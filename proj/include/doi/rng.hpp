#pragma once

#include <cmath>
#include <cstdint>

#include "doi/matrix.hpp"

namespace doi {

// SplitMix64-based generator. All draws are built from raw 64-bit outputs so
// identical seeds give bit-identical streams on every platform; std::
// distributions are avoided because their mapping is implementation-defined.
class Rng {
   public:
    explicit Rng(uint64_t seed) : state_(seed), seed0_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
    }

    // Box-Muller from two fresh uniforms; no cached spare, so the stream
    // position is a pure function of the number of calls.
    double normal() {
        double u1 = uniform01();
        if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return Complex(re, im) / std::sqrt(2.0);
    }

    Complex uniform_disk(Complex center, double radius) {
        const double r = radius * std::sqrt(uniform01());
        const double theta = 2.0 * M_PI * uniform01();
        return center + Complex(r * std::cos(theta), r * std::sin(theta));
    }

    Complex uniform_annulus(Complex center, double r_inner, double r_outer) {
        const double a2 = r_inner * r_inner, b2 = r_outer * r_outer;
        const double r = std::sqrt(a2 + (b2 - a2) * uniform01());
        const double theta = 2.0 * M_PI * uniform01();
        return center + Complex(r * std::cos(theta), r * std::sin(theta));
    }

    // Decorrelated child stream derived from the construction seed only, so
    // per-trial substreams do not depend on how much the parent has drawn.
    Rng fork(uint64_t stream) const {
        uint64_t z = seed0_ ^ (0xD1B54A32D192ED03ULL * (stream + 0x632BE59BD9B4E019ULL));
        Rng child(z);
        child.next_u64();
        return child;
    }

   private:
    uint64_t state_;
    uint64_t seed0_;
};

}  // namespace doi
