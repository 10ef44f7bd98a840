#include "bobak/rng.hpp"

namespace bobak {

Rng make_stream(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x9e3779b9u};
  return Rng(seq);
}

Point uniform_point(const Domain& domain, Rng& rng) {
  Point x(domain.dimension());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x(i) = uniform(rng, domain.lower()(i), domain.upper()(i));
  }
  return x;
}

}  // namespace bobak
