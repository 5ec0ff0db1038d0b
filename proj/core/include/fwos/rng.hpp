#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fwos {

// Reproducibility across worker counts relies on giving every logical unit of
// work (trajectory, point, refresh slot, ...) its own stream derived from a
// key, instead of sharing one sequentially-consumed generator.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Hierarchical stream key: child(i) derives a decorrelated sub-stream.
class StreamKey {
  public:
    StreamKey() : state_(0) {}
    explicit StreamKey(std::uint64_t root) : state_(splitmix64(root ^ 0x5bf03635d5b88f1dULL)) {}

    StreamKey child(std::uint64_t index) const {
        StreamKey k;
        k.state_ = splitmix64(state_ ^ splitmix64(index + 0x632be59bd9b4e019ULL));
        return k;
    }

    std::uint64_t value() const { return state_; }

  private:
    std::uint64_t state_;
};

// mt19937_64 with hand-rolled output transforms. The engine is fully
// specified by the standard; std::uniform_real_distribution and
// std::normal_distribution are not, so we avoid them to keep results
// identical across standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
    explicit Rng(const StreamKey& key) : engine_(key.value()) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on the open interval (0, 1); redraws the (measure ~2^-53) zeros.
    double uniform_open01() {
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return u;
    }

    // Standard normal via Marsaglia's polar method, one spare cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace fwos
