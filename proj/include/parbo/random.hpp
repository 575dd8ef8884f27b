#ifndef PARBO_RANDOM_HPP
#define PARBO_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace parbo
{
  using Rng = std::mt19937_64;

  /// splitmix64 finalizer; turns correlated seeds into well-spread ones.
  constexpr std::uint64_t mix64(std::uint64_t z) noexcept
  {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// FNV-1a over the bytes of a string. Stable across platforms and runs.
  constexpr std::uint64_t fnv1a64(std::string_view text) noexcept
  {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text)
    {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  /// Seed for a named random stream of one trial.  Depends only on the
  /// stream name and trial index, never on the order in which trials run.
  constexpr std::uint64_t derive_seed(std::uint64_t base_seed,
                                      std::string_view stream,
                                      std::uint64_t trial) noexcept
  {
    return mix64(base_seed ^ mix64(fnv1a64(stream) ^ mix64(trial)));
  }

  inline double standard_normal(Rng& rng)
  {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
  }

  inline double uniform01(Rng& rng)
  {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
}

#endif
