#include "dcyt/rng.hpp"

#include "dcyt/core.hpp"

namespace dcyt {

std::uint64_t derive_seed(std::uint64_t seed, const std::string& purpose) {
    std::uint64_t h = fnv1a64(kFnvOffset, seed);
    h = fnv1a64(h, purpose);
    return h;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& purpose,
                          const std::string& key) {
    return fnv1a64(derive_seed(seed, purpose), key);
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& purpose,
                          const std::string& key, std::uint64_t index) {
    return fnv1a64(derive_seed(seed, purpose, key), index);
}

}  // namespace dcyt
