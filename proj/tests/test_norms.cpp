#include "lamina/norms.hpp"
#include "lamina/random.hpp"
#include "lamina/rank_one.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace lamina;

TEST_SUITE("norms") {
  TEST_CASE("frobenius examples") {
    CHECK(frobenius(MatrixMN::identity(2)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(frobenius(MatrixMN(3, 2)) == 0.0);
    CHECK(frobenius(MatrixMN{{3, 0}, {0, 4}}) == doctest::Approx(5.0));
  }

  TEST_CASE("schatten1 examples") {
    CHECK(schatten1(MatrixMN::identity(2)) == doctest::Approx(2.0));
    CHECK(schatten1(tensor(Vector{1, 2}, Vector{3, 0})) == doctest::Approx(3 * std::sqrt(5.0)).epsilon(1e-12));
    CHECK(schatten1(MatrixMN{{1, 0}, {0, -5}}) == doctest::Approx(oracle::nuclear(MatrixMN{{1, 0}, {0, -5}})));
  }

  TEST_CASE("schatten_inf examples") {
    CHECK(schatten_inf(MatrixMN::identity(3)) == doctest::Approx(1.0));
    CHECK(schatten_inf(MatrixMN{{0, 2}, {0, 0}}) == doctest::Approx(oracle::singular_values(MatrixMN{{0, 2}, {0, 0}})[0]));
    const Vector a{1, -2, 2}, b{0.5, 4};
    CHECK(schatten_inf(tensor(a, b)) == doctest::Approx(norm(a) * norm(b)));
  }

  TEST_CASE("ssym examples and the three algebraic forms") {
    CHECK(ssym(SymMatrix(MatrixMN::identity(2))) == doctest::Approx(2.0));
    const SymMatrix d{{1, 0}, {0, -1}};
    CHECK(ssym(d) == doctest::Approx(oracle::ssym(d.matrix())));
    CHECK(ssym(d) == doctest::Approx(frobenius(sym_tensor(Vector{1, 1}, Vector{1, -1}).matrix())));
    const SymMatrix e = SymMatrix::diagonal(Vector{-2, -1, 3});
    CHECK(ssym(e) == doctest::Approx(oracle::ssym(e.matrix())));
    CHECK(ssym_2d(SymMatrix(MatrixMN::identity(2))) == doctest::Approx(2.0));
    CHECK(ssym_2d(d) == doctest::Approx(std::sqrt(2.0)));
    CHECK(ssym_2d(SymMatrix(2)) == 0.0);
    CHECK_THROWS_AS(ssym_2d(SymMatrix(3)), std::invalid_argument);

    Rng rng(21);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 2 + trial % 4;
      const SymMatrix a(uniform_matrix(rng, n, n));
      const double v = ssym(a);
      CHECK(oracle::rel(v, oracle::ssym(a.matrix())) <= 1e-10);
      CHECK(oracle::rel(ssym_definition(a), v) <= 1e-10);
      if (n == 2) CHECK(oracle::rel(ssym_2d(a), v) <= 1e-10);
    }
  }

  TEST_CASE("div_norm") {
    CHECK(div_norm(SymMatrix(MatrixMN::identity(2))) == doctest::Approx(2.0));
    // (1,1,3): |l1|+|l2| <= |l3| branch, sqrt((1+1)^2 + 3^2)
    CHECK(div_norm(SymMatrix::diagonal(Vector{1, 1, 3})) == doctest::Approx(std::sqrt(4.0 + 9.0)));
    CHECK(div_norm(SymMatrix::diagonal(Vector{1, 1, 2})) == doctest::Approx(std::sqrt(8.0)));
    CHECK(div_norm3_branch_small(1, 1, 2) == doctest::Approx(div_norm3_branch_large(1, 1, 2)).epsilon(1e-14));
    // ordering by magnitude happens inside
    CHECK(div_norm(SymMatrix::diagonal(Vector{3, -1, 1})) == doctest::Approx(std::sqrt(13.0)));
    CHECK_THROWS_AS(div_norm(SymMatrix(4)), std::invalid_argument);
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
      const SymMatrix a(uniform_matrix(rng, 2, 2));
      CHECK(oracle::rel(div_norm(a), oracle::nuclear(a.matrix())) <= 1e-10);
    }
  }

  TEST_CASE("norm axioms on random matrices") {
    Rng rng(99);
    std::uniform_real_distribution<double> scale(-3, 3);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = trial % 2 == 0 ? 2 : 3;
      const MatrixMN a = uniform_matrix(rng, n, n), b = uniform_matrix(rng, n, n);
      const SymMatrix sa(a), sb(b);
      const double t = scale(rng);
      CHECK(oracle::rel(schatten1(a * t), std::abs(t) * schatten1(a)) <= 1e-10);
      CHECK(oracle::rel(ssym(SymMatrix(sa.matrix() * t)), std::abs(t) * ssym(sa)) <= 1e-10);
      CHECK(oracle::rel(div_norm(SymMatrix(sa.matrix() * t)), std::abs(t) * div_norm(sa)) <= 1e-10);
      CHECK(schatten1(a) + schatten1(b) - schatten1(a + b) >= -1e-10);
      CHECK(ssym(sa) + ssym(sb) - ssym(SymMatrix(sa.matrix() + sb.matrix())) >= -1e-10);
      CHECK(div_norm(sa) + div_norm(sb) - div_norm(SymMatrix(sa.matrix() + sb.matrix())) >= -1e-10);
      CHECK(schatten1(a) > 0.0);
      CHECK(ssym(sa) > 0.0);

      const double f = frobenius(a), s1 = schatten1(a);
      CHECK(f <= s1 + 1e-12);
      CHECK(s1 <= std::sqrt(static_cast<double>(n)) * f + 1e-12);
      const double fs = frobenius(sa.matrix()), ss = ssym(sa), s1s = schatten1(sa.matrix());
      CHECK(fs <= ss + 1e-12);
      CHECK(ss <= s1s + 1e-12);
      CHECK(s1s <= std::sqrt(2.0) * ss + 1e-12);
    }
    CHECK(schatten1(MatrixMN(2, 2)) == 0.0);
    CHECK(ssym(SymMatrix(3)) == 0.0);
    CHECK(div_norm(SymMatrix(3)) == 0.0);
  }

  TEST_CASE("unitary invariance") {
    Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 2 + trial % 3;
      const MatrixMN a = uniform_matrix(rng, n, n);
      const MatrixMN q = random_orthogonal(rng, n), p = random_orthogonal(rng, n);
      CHECK(oracle::rel(schatten1(q.transpose() * a * p), schatten1(a)) <= 1e-10);
      const SymMatrix s(a);
      CHECK(oracle::rel(ssym(SymMatrix(q.transpose() * s.matrix() * q)), ssym(s)) <= 1e-10);
    }
  }

  TEST_CASE("norm names") {
    CHECK(parse_norm("ssym") == Norm::ssym);
    CHECK(parse_norm("schatten1") == Norm::schatten1);
    CHECK(to_string(Norm::frobenius) == "frobenius");
    CHECK_THROWS(parse_norm("spectral"));
  }
}
