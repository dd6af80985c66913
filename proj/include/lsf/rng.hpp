#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lsf {

/// Mix a 64-bit value (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

/// Derive a substream seed from a master seed and a path of stream labels.
/// Distinct paths give statistically independent streams; the derivation is
/// a pure function so parallel schedules can reproduce serial results.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

/// Deterministic random stream: 64-bit Mersenne Twister with uniform and
/// standard-normal draws implemented here, so results do not depend on the
/// standard library's distribution implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(mix64(seed)) {}
    RngStream(std::uint64_t master, std::initializer_list<std::uint64_t> path)
        : RngStream(derive_seed(master, path)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on the open interval (0, 1).
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    /// Standard normal via the Marsaglia polar method.
    double normal();

    /// Standard exponential (mean 1).
    double exponential();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace lsf
