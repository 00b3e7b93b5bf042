#ifndef ORDERSENS_CAUSAL_RANDOM_HPP
#define ORDERSENS_CAUSAL_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace ordersens::causal {

/// mt19937_64 with sampling written out by hand, so seeded streams are
/// identical across standard library implementations.
class Rng {
    __extension__ typedef unsigned __int128 wide;

public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>((static_cast<wide>(engine_()) * n) >> 64);
    }
    bool bernoulli(double p) { return uniform() < p; }
    double exponential(double mean) { return mean <= 0.0 ? 0.0 : -mean * std::log1p(-uniform()); }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace ordersens::causal

#endif
