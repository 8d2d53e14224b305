#include "swucrl/rng.hpp"

#include <cmath>

namespace swucrl {

double Rng::exponential() { return -std::log1p(-uniform()); }

std::size_t Rng::categorical(std::span<const double> probs) {
  const double u = uniform();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

}  // namespace swucrl
