#pragma once
//
// Reproducible randomness. All pseudo-random draws go through
// std::mt19937_64; independent streams (one per trial, one per cell) are
// derived from (seed, stream index) with a splitmix64 mix so that results do
// not depend on evaluation order or thread count.
//

#include "lamina/linalg.hpp"

#include <cstdint>
#include <random>

namespace lamina {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
Rng make_stream(std::uint64_t seed, std::uint64_t stream);

Vector gaussian_vector(Rng& rng, std::size_t n);
MatrixMN gaussian_matrix(Rng& rng, std::size_t m, std::size_t n);
MatrixMN uniform_matrix(Rng& rng, std::size_t m, std::size_t n, double lo = -1.0, double hi = 1.0);

// Orthonormal columns from Gram-Schmidt QR of a Gaussian m x k matrix (k <= m).
MatrixMN random_orthonormal_columns(Rng& rng, std::size_t m, std::size_t k);
MatrixMN random_orthogonal(Rng& rng, std::size_t n);

// Radical-inverse (Halton) low-discrepancy sequence, dimensions up to 8.
class Halton {
 public:
  explicit Halton(std::size_t dim, std::uint64_t skip = 1);
  Vector next();
  std::size_t dim() const { return dim_; }

 private:
  std::size_t dim_;
  std::uint64_t index_;
};

}  // namespace lamina
