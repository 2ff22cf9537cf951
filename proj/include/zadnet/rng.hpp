#pragma once

#include <cmath>
#include <cstdint>

namespace zadnet {

// splitmix64 finalizer; used both as a stream generator for seeding and as
// the counter-based split that derives per-(run, node) substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Derive an independent child seed from (seed, word). Children for distinct
// words are decorrelated by the double avalanche pass.
inline std::uint64_t split_seed(std::uint64_t seed, std::uint64_t word) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ull * (word + 0x632be59bd9b4e019ull));
    std::uint64_t a = splitmix64(x);
    return splitmix64(a);
}

// xoshiro256++ (Blackman/Vigna), seeded through splitmix64.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        for (auto& word : state_) word = splitmix64(seed);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

// Standard-normal stream via the Marsaglia polar method (exact, pair-cached).
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, q;
        do {
            u = 2.0 * gen_.uniform() - 1.0;
            v = 2.0 * gen_.uniform() - 1.0;
            q = u * u + v * v;
        } while (q >= 1.0 || q == 0.0);
        const double f = std::sqrt(-2.0 * std::log(q) / q);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    std::uint64_t next_raw() { return gen_.next(); }

  private:
    Xoshiro256pp gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace zadnet
