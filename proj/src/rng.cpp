#include "mrcst/rng.hpp"

namespace mrcst {
namespace {

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next() {
  state_ += 0x9E3779B97F4A7C15ull;
  return splitmix_finalize(state_);
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::size_t Rng::below(std::size_t bound) {
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(next()) * bound) >> 64);
}

std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x9E3779B97F4A7C15ull;
  for (std::uint64_t p : parts) {
    h ^= splitmix_finalize(p) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    h = splitmix_finalize(h);
  }
  return h;
}

}  // namespace mrcst
