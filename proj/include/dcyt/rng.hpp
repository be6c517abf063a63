#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dcyt {

// Deterministic splitmix64 stream. Used instead of <random> engines so that
// identical seeds give identical draws on every platform and toolchain,
// which the byte-identical-output contract depends on.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    /// Uniform integer in [lo, hi] inclusive.
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
        return lo + below(hi - lo + 1);
    }

    /// Uniform real in [0, 1).
    double unit_real() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool chance(double probability) { return unit_real() < probability; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    /// Sample k distinct indices from [0, n), in selection order.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        shuffle(all);
        all.resize(k);
        return all;
    }

private:
    std::uint64_t state_;
};

/// Derives an independent stream seed from (seed, purpose, key parts).
/// Keying by purpose and id keeps unrelated draws stable when a model gains
/// entities or instances.
std::uint64_t derive_seed(std::uint64_t seed, const std::string& purpose);
std::uint64_t derive_seed(std::uint64_t seed, const std::string& purpose,
                          const std::string& key);
std::uint64_t derive_seed(std::uint64_t seed, const std::string& purpose,
                          const std::string& key, std::uint64_t index);

}  // namespace dcyt
