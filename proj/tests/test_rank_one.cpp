#include "lamina/norms.hpp"
#include "lamina/random.hpp"
#include "lamina/rank_one.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace lamina;

TEST_SUITE("rank_one") {
  TEST_CASE("tensor products") {
    CHECK(tensor(Vector{1, 0}, Vector{0, 1}) == MatrixMN{{0, 1}, {0, 0}});
    CHECK(schatten1(tensor(Vector{1, 2}, Vector{3, 0})) == doctest::Approx(3 * std::sqrt(5.0)));
    CHECK(frobenius(tensor(Vector{1, 2}, Vector{0, 0})) == 0.0);
    CHECK(sym_tensor(Vector{1, 0}, Vector{1, 0}).matrix() == MatrixMN{{1, 0}, {0, 0}});
    CHECK(sym_tensor(Vector{1, 1}, Vector{1, -1}).matrix() == MatrixMN{{1, 0}, {0, -1}});
    const Eigen::VectorXd ev = oracle::sym_eigenvalues(sym_tensor(Vector{1, 0, 0}, Vector{0, 1, 0}).matrix());
    CHECK(ev[0] == doctest::Approx(-0.5));
    CHECK(ev[1] == doctest::Approx(0.0));
    CHECK(ev[2] == doctest::Approx(0.5));
  }

  TEST_CASE("symmetric rank-one matrices: opposite-sign spectrum, ssym == frobenius") {
    Rng rng(8);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 2 + trial % 4;
      const SymMatrix s = sym_tensor(gaussian_vector(rng, n), gaussian_vector(rng, n));
      const Eigen::VectorXd ev = oracle::sym_eigenvalues(s.matrix());
      CHECK(ev[0] <= 1e-12);
      CHECK(ev[n - 1] >= -1e-12);
      for (std::size_t i = 1; i + 1 < n; ++i) CHECK(std::abs(ev[i]) <= 1e-10);
      CHECK(oracle::rel(ssym(s), frobenius(s.matrix())) <= 1e-10);
    }
  }

  TEST_CASE("sym_rank_one_factor") {
    const RankOnePiece p = sym_rank_one_factor(SymMatrix{{1, 0}, {0, -1}});
    CHECK(frobenius(sym_tensor(p.left, p.right).matrix() - MatrixMN{{1, 0}, {0, -1}}) <= 1e-10);
    const RankOnePiece q = sym_rank_one_factor(SymMatrix{{1, 0}, {0, 0}});
    CHECK(q.left == q.right);
    CHECK(std::abs(q.left[0]) == doctest::Approx(1.0));
    CHECK(sym_rank_one_factor(SymMatrix(2)).is_zero());
    CHECK_THROWS_AS(sym_rank_one_factor(SymMatrix(MatrixMN::identity(2))), std::invalid_argument);
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
      const SymMatrix a = sym_tensor(gaussian_vector(rng, 2), gaussian_vector(rng, 2));
      const RankOnePiece f = sym_rank_one_factor(a);
      CHECK(frobenius(sym_tensor(f.left, f.right).matrix() - a.matrix()) <= 1e-10 * (1 + frobenius(a.matrix())));
    }
  }

  TEST_CASE("bd_decompose examples") {
    const SymMatrix a = SymMatrix::diagonal(Vector{-2, -1, 3});
    const Decomposition d = bd_decompose(a);
    CHECK(d.reconstruction_error() <= 1e-10);
    CHECK(d.cost() == doctest::Approx(3 * std::sqrt(2.0)));
    // delta_1 = 2/3, delta_2 = 1/3: piece norms 2 sqrt(2) and sqrt(2)
    REQUIRE(d.pieces.size() == 2);
    CHECK(frobenius(d.pieces[0].matrix()) == doctest::Approx(2 * std::sqrt(2.0)));
    CHECK(frobenius(d.pieces[1].matrix()) == doctest::Approx(std::sqrt(2.0)));

    const Decomposition same = bd_decompose(SymMatrix::diagonal(Vector{1, 2}));
    CHECK(same.pieces.size() == 2);
    CHECK(same.cost() == doctest::Approx(3.0));
    CHECK(same.pieces[0].tag == PieceTag::same_sign);

    const Decomposition general = bd_decompose(SymMatrix::diagonal(Vector{-1, -1, 1, 1}));
    CHECK(general.reconstruction_error() <= 1e-10);
    CHECK(general.cost() == doctest::Approx(2 * std::sqrt(2.0)));

    const Decomposition mirror = bd_decompose(SymMatrix::diagonal(Vector{-3, 1, 2}));
    CHECK(mirror.reconstruction_error() <= 1e-10);
    CHECK(mirror.cost() == doctest::Approx(oracle::ssym(MatrixMN::diagonal(Vector{-3, 1, 2}))));

    CHECK(bd_decompose(SymMatrix(3)).pieces.empty());
  }

  TEST_CASE("bd_decompose on random matrices") {
    Rng rng(31);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 2 + trial % 4;
      const SymMatrix a(uniform_matrix(rng, n, n));
      const Decomposition d = bd_decompose(a);
      CHECK(d.reconstruction_error() <= 1e-10 * (1 + frobenius(a.matrix())));
      CHECK(oracle::rel(d.cost(), oracle::ssym(a.matrix())) <= 1e-9);
      for (const RankOnePiece& p : d.pieces) {
        const SymMatrix s(p.matrix());
        CHECK(std::abs(ssym(s) - frobenius(s.matrix())) <= 1e-10 * (1 + frobenius(s.matrix())));
      }
      CHECK(d.pieces.size() <= n * (n - 1) + 1);
    }
  }

  TEST_CASE("bd_decompose: recursion bound up to n = 8, conjugation invariance of cost") {
    Rng rng(32);
    for (std::size_t n = 2; n <= 8; ++n)
      for (int trial = 0; trial < 20; ++trial) {
        const SymMatrix a(gaussian_matrix(rng, n, n));
        const Decomposition d = bd_decompose(a);
        CHECK(d.pieces.size() <= std::max<std::size_t>(n * (n - 1), n));
        CHECK(oracle::rel(d.cost(), oracle::ssym(a.matrix())) <= 1e-9);
        const MatrixMN q = random_orthogonal(rng, n);
        const SymMatrix b(q * a.matrix() * q.transpose());
        CHECK(oracle::rel(bd_decompose(b).cost(), d.cost()) <= 1e-9);
      }
  }

  TEST_CASE("bv_decompose") {
    const Decomposition id = bv_decompose(MatrixMN::identity(2));
    CHECK(id.pieces.size() == 2);
    CHECK(id.cost() == doctest::Approx(2.0));
    CHECK(bv_decompose(tensor(Vector{1, 2}, Vector{3, 0})).pieces.size() == 1);
    const Decomposition nil = bv_decompose(MatrixMN{{0, 2}, {0, 0}});
    CHECK(nil.pieces.size() == 1);
    CHECK(nil.cost() == doctest::Approx(2.0));

    Rng rng(41);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t m = 1 + trial % 5, n = 1 + (trial / 5) % 5;
      const MatrixMN a = uniform_matrix(rng, m, n);
      const Decomposition d = bv_decompose(a);
      CHECK(d.reconstruction_error() <= 1e-10 * (1 + frobenius(a)));
      CHECK(oracle::rel(d.cost(), oracle::nuclear(a)) <= 1e-9);
      for (std::size_t i = 0; i < d.pieces.size(); ++i)
        for (std::size_t j = 0; j < d.pieces.size(); ++j)
          CHECK(std::abs(dot(d.pieces[i].right, d.pieces[j].right) - (i == j ? 1.0 : 0.0)) <= 1e-10);
    }
  }
}
