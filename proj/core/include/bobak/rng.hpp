#pragma once

#include <cstdint>
#include <random>

#include "bobak/domain.hpp"

namespace bobak {

using Rng = std::mt19937_64;

/// Independent random streams of one run. Each stream is seeded from (run seed, stream id) only,
/// so consuming one stream never shifts another.
enum class Stream : std::uint32_t {
  Init = 1,
  KernelTheta = 2,
  Acquisition = 3,
  HyperoptRaw = 4,
  HyperoptWarp = 5,
  HyperoptSum = 6,
};

Rng make_stream(std::uint64_t seed, Stream stream);

/// Uniform double in [0, 1) built from the top 53 bits; identical across standard libraries.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

Point uniform_point(const Domain& domain, Rng& rng);

}  // namespace bobak
