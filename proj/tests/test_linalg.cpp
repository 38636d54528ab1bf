#include "lamina/linalg.hpp"
#include "lamina/norms.hpp"
#include "lamina/random.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace lamina;

TEST_SUITE("linalg") {
  TEST_CASE("symmetric eigen-decomposition matches Eigen and reconstructs") {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 2 + trial % 5;
      const SymMatrix a(uniform_matrix(rng, n, n));
      const Spectrum s = eigen_sym(a);
      const Eigen::VectorXd ref = oracle::sym_eigenvalues(a.matrix());
      for (std::size_t i = 0; i < n; ++i) CHECK(s.values[i] == doctest::Approx(ref[i]).epsilon(1e-10));
      CHECK(frobenius(s.reconstruct() - a.matrix()) <= 1e-10 * (1 + frobenius(a.matrix())));
      const MatrixMN gram = s.vectors.transpose() * s.vectors;
      CHECK(frobenius(gram - MatrixMN::identity(n)) <= 1e-10);
      CHECK(std::is_sorted(s.values.begin(), s.values.end()));
    }
  }

  TEST_CASE("clustered and repeated spectra") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
      const MatrixMN q = random_orthogonal(rng, 3);
      const double l = 0.5 + trial * 0.01;
      const Vector d{l, l * (1 + 1e-9 * trial), -2.0};
      const SymMatrix a(q * MatrixMN::diagonal(d) * q.transpose());
      const Spectrum s = eigen_sym(a);
      CHECK(frobenius(s.reconstruct() - a.matrix()) <= 1e-10 * (1 + frobenius(a.matrix())));
      CHECK(frobenius(s.vectors.transpose() * s.vectors - MatrixMN::identity(3)) <= 1e-10);
    }
    const Spectrum id = eigen_sym(SymMatrix(MatrixMN::identity(3)));
    CHECK(id.vectors == MatrixMN::identity(3));
  }

  TEST_CASE("near-zero eigenvalues snap to zero") {
    const SymMatrix a = SymMatrix::diagonal(Vector{1e-14, 1.0});
    CHECK(eigen_sym(a).values[0] == 0.0);
  }

  TEST_CASE("svd against Eigen, rectangular shapes") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t m = 1 + trial % 5, n = 1 + (trial / 5) % 5;
      const MatrixMN a = uniform_matrix(rng, m, n);
      const Svd s = svd(a);
      const Eigen::VectorXd ref = oracle::singular_values(a);
      for (long i = 0; i < ref.size(); ++i) CHECK(s.values[i] == doctest::Approx(ref[i]).epsilon(1e-10));
      MatrixMN back(m, n);
      for (std::size_t i = 0; i < s.values.size(); ++i)
        for (std::size_t r = 0; r < m; ++r)
          for (std::size_t c = 0; c < n; ++c) back(r, c) += s.values[i] * s.u(r, i) * s.v(c, i);
      CHECK(frobenius(back - a) <= 1e-10 * (1 + frobenius(a)));
    }
  }

  TEST_CASE("polar factors") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t m = 1 + trial % 4, n = 1 + (trial / 4) % 4;
      const MatrixMN a = uniform_matrix(rng, m, n);
      const PolarFactors p = polar(a);
      CHECK(frobenius(p.r * p.u.matrix() - a) <= 1e-10 * (1 + frobenius(a)));
      CHECK(eigen_sym(p.u).values.front() >= -1e-12);
    }
    const PolarFactors rot = polar(MatrixMN{{0, -2}, {2, 0}});
    CHECK(frobenius(rot.u.matrix() - 2.0 * MatrixMN::identity(2)) <= 1e-12);
  }

  TEST_CASE("solve, inverse, determinant") {
    const MatrixMN a{{2, 1}, {1, 3}};
    CHECK(determinant(a) == doctest::Approx(5.0));
    CHECK(frobenius(a * inverse(a) - MatrixMN::identity(2)) <= 1e-14);
    CHECK_THROWS_AS(inverse(MatrixMN{{1, 2}, {2, 4}}), std::domain_error);
  }

  TEST_CASE("canonical sign") {
    CHECK(canonical(Vector{-1, 0.5}) == Vector{1, -0.5});
    CHECK(canonical(Vector{0.5, -0.5}) == Vector{0.5, -0.5});
    CHECK(canonical(Vector{-0.5, 0.5}) == Vector{0.5, -0.5});
  }

  TEST_CASE("symmetrization is exact") {
    const SymMatrix s(MatrixMN{{1, 2}, {0.1, 3}});
    CHECK(s(0, 1) == s(1, 0));
  }
}
