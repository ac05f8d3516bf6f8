#include "mfising/rng.hpp"

#include <array>

namespace mfising {

namespace {

// splitmix64 finaliser
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngSpec RngSpec::with_salt(std::uint64_t salt) const { return {mix(seed ^ mix(salt)), stream}; }

Engine make_engine(const RngSpec& spec) {
  const std::array<std::uint32_t, 4> words{
      static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
      static_cast<std::uint32_t>(spec.stream), static_cast<std::uint32_t>(spec.stream >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return Engine(seq);
}

}  // namespace mfising
