#pragma once

#include <cstdint>

namespace mechlab {

// Counter-based splittable RNG. A generator is (seed, stream, counter); each
// output mixes the triple, so copies replay identical draws and derived child
// streams are independent of how much the parent has been consumed. This is
// what makes common-random-number comparisons and run records reproducible.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() {
        return mix(seed_ ^ mix(stream_ ^ mix(counter_++)));
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    // Child generator for an independent purpose; deterministic in (state, label).
    CounterRng derive(std::uint64_t label) const {
        return CounterRng(seed_, mix(stream_ + 0x9e3779b97f4a7c15ULL * (label + 1)));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

} // namespace mechlab
