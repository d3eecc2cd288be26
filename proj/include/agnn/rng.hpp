#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace agnn {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derives a seed for the named stream `name`, sub-index `index`, from a root seed.
/// Streams with different names never share state, so one component's randomness
/// can be varied without perturbing the others.
constexpr std::uint64_t stream_seed(std::uint64_t root, std::string_view name,
                                    std::uint64_t index = 0) {
  return mix_seed(mix_seed(root ^ hash_name(name)) + mix_seed(index));
}

inline Rng make_rng(std::uint64_t root, std::string_view name, std::uint64_t index = 0) {
  return Rng{stream_seed(root, name, index)};
}

/// Uniform double in [0, 1) with an explicit 53-bit construction so draws do not
/// depend on the standard library's generate_canonical.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace agnn
