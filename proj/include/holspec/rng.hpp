#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "holspec/util.hpp"

namespace holspec {

// All randomness in the project flows from one user-visible seed; each module
// draws from its own named stream so adding draws in one module does not
// perturb another.
inline std::mt19937_64 rng_stream(std::uint64_t seed, const std::string& stream) {
    std::uint64_t z = seed ^ fnv1a(stream);
    // splitmix64 scrambling of the combined seed
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z = z ^ (z >> 31);
    return std::mt19937_64(z);
}

}  // namespace holspec
