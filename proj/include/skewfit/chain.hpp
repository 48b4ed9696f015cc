// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace skewfit {

enum class LatentUpdate { GeometricProposal, RandomWalk };

struct ChainConfig {
  std::size_t iterations = 20000;
  std::size_t burn_in = 5000;
  std::size_t thin = 5;
  std::uint64_t seed = 1;
  LatentUpdate latent_update = LatentUpdate::RandomWalk;

  // Throws ConfigError when burn_in >= iterations, thin == 0 or iterations == 0.
  void validate() const;

  // Iteration number (1-based) of the k-th retained draw.
  std::size_t iteration_of(std::size_t k) const { return burn_in + (k + 1) * thin; }
};

// Post burn-in, thinned parameter draws plus the acceptance rate of the
// sampler's Metropolis step.
template <class Draw>
struct PosteriorChain {
  std::vector<Draw> draws;
  double acceptance_rate = 0.0;
  ChainConfig config;
};

}  // namespace skewfit
