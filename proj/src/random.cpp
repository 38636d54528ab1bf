#include "lamina/random.hpp"

#include <array>
#include <stdexcept>

namespace lamina {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Rng(splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL)));
}

Vector gaussian_vector(Rng& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (double& x : v) x = g(rng);
  return v;
}

MatrixMN gaussian_matrix(Rng& rng, std::size_t m, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> d(m * n);
  for (double& x : d) x = g(rng);
  return MatrixMN(m, n, std::move(d));
}

MatrixMN uniform_matrix(Rng& rng, std::size_t m, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> d(m * n);
  for (double& x : d) x = u(rng);
  return MatrixMN(m, n, std::move(d));
}

MatrixMN random_orthonormal_columns(Rng& rng, std::size_t m, std::size_t k) {
  if (k > m) throw std::invalid_argument("random_orthonormal_columns: k > m");
  for (;;) {
    MatrixMN g = gaussian_matrix(rng, m, k);
    MatrixMN q(m, k);
    bool ok = true;
    for (std::size_t j = 0; j < k && ok; ++j) {
      Vector c = g.col(j);
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t i = 0; i < j; ++i) {
          const Vector qi = q.col(i);
          const double p = dot(c, qi);
          for (std::size_t r = 0; r < m; ++r) c[r] -= p * qi[r];
        }
      const double len = norm(c);
      if (len < 1e-8) ok = false;
      for (std::size_t r = 0; r < m && ok; ++r) q(r, j) = c[r] / len;
    }
    if (ok) return q;
  }
}

MatrixMN random_orthogonal(Rng& rng, std::size_t n) { return random_orthonormal_columns(rng, n, n); }

namespace {
constexpr std::array<std::uint64_t, 8> kPrimes{2, 3, 5, 7, 11, 13, 17, 19};

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}
}  // namespace

Halton::Halton(std::size_t dim, std::uint64_t skip) : dim_(dim), index_(skip) {
  if (dim == 0 || dim > kPrimes.size()) throw std::invalid_argument("Halton: unsupported dimension");
}

Vector Halton::next() {
  Vector p(dim_);
  for (std::size_t d = 0; d < dim_; ++d) p[d] = radical_inverse(index_, kPrimes[d]);
  ++index_;
  return p;
}

}  // namespace lamina
