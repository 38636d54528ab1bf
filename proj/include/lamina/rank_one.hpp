#pragma once
//
// Tensor products a (x) b, symmetric products a (.) b, and exact splittings
// of a matrix into rank-one pieces on which the Schatten-type norms add up.
//

#include "lamina/linalg.hpp"

#include <optional>
#include <vector>

namespace lamina {

MatrixMN tensor(std::span<const double> a, std::span<const double> b);
SymMatrix sym_tensor(std::span<const double> a, std::span<const double> b);

// Which branch of the symmetric splitting produced a piece. Ordering of
// pieces in a Decomposition follows (tag, eigenvalue index).
enum class PieceTag {
  general,      // tensor piece or a random split
  same_sign,    // lambda_i e_i (.) e_i
  one_sign_off, // alpha^(j) (.) beta^(j) of the one-exception case
};

struct RankOnePiece {
  Vector left;
  Vector right;
  bool symmetric = false;
  PieceTag tag = PieceTag::general;

  bool is_zero() const;
  MatrixMN matrix() const;
};

struct Decomposition {
  std::vector<RankOnePiece> pieces;
  MatrixMN target;

  MatrixMN sum() const;
  double cost() const;  // sum of Frobenius norms of the pieces
  double reconstruction_error() const;
};

// alpha, beta with alpha (.) beta == A for a 2x2 symmetric A with det <= 0.
// Rank-one positive semidefinite input gives alpha == beta; rank-one
// negative semidefinite input gives beta == -alpha. Throws
// std::invalid_argument when det(A) > 0 or dim != 2.
RankOnePiece sym_rank_one_factor(const SymMatrix& a);

// Splitting of a symmetric matrix into symmetric rank-one pieces whose
// Frobenius norms add up to ssym(A):
//   * all eigenvalues of one sign: lambda_i e_i (.) e_i,
//   * exactly one eigenvalue of the minority sign: alpha^(j) (.) beta^(j),
//   * otherwise: split along the positive eigenvalues into blocks with a
//     single positive eigenvalue and recurse in dimension r + 1.
// The optional spectrum lets callers choose a basis inside degenerate
// eigenspaces; it must diagonalize A.
Decomposition bd_decompose(const SymMatrix& a);
Decomposition bd_decompose(const SymMatrix& a, const Spectrum& spectrum);

// A = sum_i s_i (R e_i) (x) e_i from the polar factors; cost == schatten1(A).
Decomposition bv_decompose(const MatrixMN& a);

}  // namespace lamina
