#pragma once

// Seeded random matrix factory. Every battery draws through a (master seed,
// trial index) substream so any failing trial can be replayed in isolation.
// Gaussian sampling is hand-rolled Box-Muller on top of mt19937_64, which
// pins the byte stream to the standard rather than to a particular libstdc++.

#include <cstdint>
#include <random>

#include "modent/types.hpp"

namespace modent {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}
  Rng(std::uint64_t master_seed, std::uint64_t stream);

  double uniform();  // [0, 1)
  double gauss();    // standard normal
  cplx cgauss();     // complex normal, E|z|^2 = 1
  int uniform_int(int lo, int hi);  // inclusive bounds

  CMat gaussian(int rows, int cols);
  CMat hermitian(int n);
  CMat psd(int n);
  CMat density(int n);
  CMat density_rank(int n, int r);
  CMat unitary(int n);
  CMat isometry(int rows, int cols);  // cols <= rows, V^H V = I
  CMat contraction(int n);            // operator norm <= 1
  CVec state_vector(int n);
  RVec probability(int n);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace modent
