#pragma once
//
// Small dense linear algebra: matrices, symmetric eigen-decomposition,
// one-sided Jacobi SVD and polar factors.
//
// Everything here is sized for desk-scale problems (n <= 8); there is no
// blocking and no external BLAS.
//

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace lamina {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
Vector scaled(std::span<const double> a, double s);
Vector add(std::span<const double> a, std::span<const double> b);
Vector sub(std::span<const double> a, std::span<const double> b);

// Sign convention shared by eigenvectors, singular vectors and laminate
// directions: the largest-magnitude component is made positive, ties
// (within 1e-9) resolved toward the lowest index.
int canonical_sign(std::span<const double> v);
Vector canonical(std::span<const double> v);

class MatrixMN {
 public:
  MatrixMN() = default;
  MatrixMN(std::size_t rows, std::size_t cols);
  MatrixMN(std::size_t rows, std::size_t cols, std::vector<double> row_major);
  MatrixMN(std::initializer_list<std::initializer_list<double>> rows);

  static MatrixMN identity(std::size_t n);
  static MatrixMN diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }
  Vector row(std::size_t i) const;
  Vector col(std::size_t j) const;

  MatrixMN transpose() const;
  Vector apply(std::span<const double> x) const;

  MatrixMN& operator+=(const MatrixMN& o);
  MatrixMN& operator-=(const MatrixMN& o);
  MatrixMN& operator*=(double s);

  friend MatrixMN operator+(MatrixMN a, const MatrixMN& b) { return a += b; }
  friend MatrixMN operator-(MatrixMN a, const MatrixMN& b) { return a -= b; }
  friend MatrixMN operator*(MatrixMN a, double s) { return a *= s; }
  friend MatrixMN operator*(double s, MatrixMN a) { return a *= s; }
  friend MatrixMN operator*(const MatrixMN& a, const MatrixMN& b);
  friend bool operator==(const MatrixMN&, const MatrixMN&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Symmetric n x n matrix. Construction from a general square matrix
// takes the symmetric part, so entries(i,j) == entries(j,i) bit-for-bit.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n);
  explicit SymMatrix(const MatrixMN& a);
  SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymMatrix diagonal(std::span<const double> d);

  std::size_t dim() const { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  void set(std::size_t i, std::size_t j, double v);

  const MatrixMN& matrix() const { return m_; }
  double trace() const;

 private:
  MatrixMN m_;
};

MatrixMN skew_part(const MatrixMN& a);

// Ascending eigenvalues with orthonormal eigenvectors (columns of `vectors`).
struct Spectrum {
  Vector values;
  MatrixMN vectors;

  Vector vector(std::size_t i) const { return vectors.col(i); }
  MatrixMN reconstruct() const;
};

// Relative threshold below which an eigenvalue or singular value is treated
// as exactly zero before any sign-based case analysis.
inline constexpr double kSnapTolerance = 1e-12;
double snap_threshold(const MatrixMN& a);

// Closed form for n <= 3 (Cardano plus one Newton polish for n = 3), cyclic
// Jacobi for larger n and as the fallback on clustered 3x3 spectra.
// Eigenvalues with |lambda| <= 1e-12 (1 + |A|_F) are snapped to zero.
Spectrum eigen_sym(const SymMatrix& a);
Spectrum eigen_sym_jacobi(const SymMatrix& a);

// Singular values in descending order; u_i are the left singular vectors
// (zero columns where s_i == 0 and no completion was possible).
struct Svd {
  Vector values;
  MatrixMN u;  // m x n
  MatrixMN v;  // n x n orthogonal
};

Svd svd(const MatrixMN& a);

// A = R U with U = sqrt(A^T A). When m >= n, R has orthonormal columns;
// when m < n it is the partial isometry sum_{s_i > 0} u_i v_i^T.
struct PolarFactors {
  MatrixMN r;
  SymMatrix u;
  Vector singular_values;
  MatrixMN right_vectors;
};

PolarFactors polar(const MatrixMN& a);

// Solves M X = B by Gaussian elimination with partial pivoting.
// Throws std::domain_error on a (numerically) singular M.
MatrixMN solve(const MatrixMN& m, const MatrixMN& b);
MatrixMN inverse(const MatrixMN& m);
double determinant(const MatrixMN& m);

}  // namespace lamina
