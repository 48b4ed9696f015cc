// Apache License, Version 2.0, refer to LICENSE.txt

#include "skewfit/chain.hpp"

#include "skewfit/errors.hpp"

namespace skewfit {

void ChainConfig::validate() const {
  if (iterations == 0) throw ConfigError("iterations must be positive");
  if (thin == 0) throw ConfigError("thin must be positive");
  if (burn_in >= iterations) throw ConfigError("burn_in must be smaller than iterations");
  if (iterations - burn_in < thin) {
    throw ConfigError("no draws retained: iterations - burn_in < thin");
  }
}

}  // namespace skewfit
