#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace doa {

// Default master seed used when the CLI is run without --seed.
inline constexpr std::uint64_t kDefaultSeed = 0x5eedu;

// splitmix64 step; used to decorrelate seeds derived from small integers.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from (master, stream index, tag).
// The tag keeps per-algorithm noise streams stable under reordering of the
// algorithm list in a config.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::string_view tag = {});

// Seedable random stream with the distributions the synthesiser needs.
// All draws are fully determined by the seed; no global state.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    RngStream(std::uint64_t master, std::uint64_t stream, std::string_view tag = {})
        : engine_(derive_seed(master, stream, tag)) {}

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (pair cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Circular complex Gaussian with E|z|^2 = 1.
    std::complex<double> complex_normal() {
        double re = normal();
        double im = normal();
        return {re * 0.7071067811865475244, im * 0.7071067811865475244};
    }

    // Uniform phase point on the unit circle.
    std::complex<double> unit_phase() {
        double a = 6.283185307179586476925286766559 * uniform();
        return {std::cos(a), std::sin(a)};
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace doa
