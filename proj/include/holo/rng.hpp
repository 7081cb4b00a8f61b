#ifndef HOLO_RNG_HPP
#define HOLO_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace holo {

// splitmix64; used to decorrelate (seed, stream) pairs before seeding the
// per-stream engine, so parallel schedules cannot change the draws.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent engine for stream `index` of a run keyed by `seed`.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 1)));
}

// CN(0, sigma2): circularly symmetric complex Gaussian.
template <class Engine>
std::complex<double> complex_gaussian(Engine& eng, double sigma2 = 1.0) {
    std::normal_distribution<double> n(0.0, std::sqrt(sigma2 / 2.0));
    const double re = n(eng);
    const double im = n(eng);
    return {re, im};
}

} // namespace holo

#endif
