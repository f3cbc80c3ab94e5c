#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace mrcst {

// SplitMix64 generator. Self-contained so seeded results are identical
// across platforms, thread counts and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform double in [0, 1).
  double uniform();

  // Uniform integer in [0, bound). bound must be > 0.
  std::size_t below(std::size_t bound);

 private:
  std::uint64_t state_;
};

// FNV-1a over the bytes of s.
std::uint64_t hash_string(std::string_view s);

// Order-sensitive combination of seed components, e.g.
// mix_seed({master, run_index, hash_string(subject_id)}).
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

}  // namespace mrcst
