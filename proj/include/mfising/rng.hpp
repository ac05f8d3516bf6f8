#pragma once

#include <cstdint>
#include <random>

namespace mfising {

// (seed, stream) names one reproducible random sequence. The engine is
// std::mt19937_64 initialised from a std::seed_seq over the four 32-bit
// halves of seed and stream, so distinct streams of one seed give unrelated
// sequences. Fixed for this release; output is bit-identical per build.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  // A sibling namespace of streams for a different purpose (e.g. chain
  // randomness versus dataset randomness for the same replication index).
  [[nodiscard]] RngSpec with_salt(std::uint64_t salt) const;
  [[nodiscard]] RngSpec with_stream(std::uint64_t s) const { return {seed, s}; }
  friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

using Engine = std::mt19937_64;

[[nodiscard]] Engine make_engine(const RngSpec& spec);

}  // namespace mfising
