#include "lamina/rank_one.hpp"

#include "lamina/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace lamina {

MatrixMN tensor(std::span<const double> a, std::span<const double> b) {
  MatrixMN m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

SymMatrix sym_tensor(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("sym_tensor: size mismatch");
  SymMatrix s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i; j < a.size(); ++j) s.set(i, j, 0.5 * (a[i] * b[j] + b[i] * a[j]));
  return s;
}

bool RankOnePiece::is_zero() const {
  return norm(left) == 0.0 || norm(right) == 0.0;
}

MatrixMN RankOnePiece::matrix() const {
  if (symmetric) return sym_tensor(left, right).matrix();
  return tensor(left, right);
}

MatrixMN Decomposition::sum() const {
  MatrixMN s(target.rows(), target.cols());
  for (const RankOnePiece& p : pieces) s += p.matrix();
  return s;
}

double Decomposition::cost() const {
  double c = 0.0;
  for (const RankOnePiece& p : pieces) c += frobenius(p.matrix());
  return c;
}

double Decomposition::reconstruction_error() const { return frobenius(sum() - target); }

RankOnePiece sym_rank_one_factor(const SymMatrix& a) {
  if (a.dim() != 2) throw std::invalid_argument("sym_rank_one_factor: matrix must be 2x2");
  const Spectrum s = eigen_sym(a);
  const double lo = s.values[0], hi = s.values[1];
  if (lo > 0.0 || hi < 0.0) throw std::invalid_argument("sym_rank_one_factor: det(A) > 0");
  const Vector e_lo = s.vector(0), e_hi = s.vector(1);
  RankOnePiece p{Vector(2, 0.0), Vector(2, 0.0), true, PieceTag::one_sign_off};
  if (lo == 0.0 && hi == 0.0) return p;
  if (lo == 0.0) {
    p.left = scaled(e_hi, std::sqrt(hi));
    p.right = p.left;
    return p;
  }
  if (hi == 0.0) {
    p.left = scaled(e_lo, std::sqrt(-lo));
    p.right = scaled(p.left, -1.0);
    return p;
  }
  const double sl = std::sqrt(-lo), sh = std::sqrt(hi);
  for (std::size_t i = 0; i < 2; ++i) {
    p.left[i] = sl * e_lo[i] + sh * e_hi[i];
    p.right[i] = -sl * e_lo[i] + sh * e_hi[i];
  }
  return p;
}

namespace {

void check_spectrum(const SymMatrix& a, const Spectrum& s) {
  if (s.values.size() != a.dim() || s.vectors.rows() != a.dim() || s.vectors.cols() != a.dim())
    throw std::invalid_argument("bd_decompose: spectrum has the wrong dimension");
  const double err = frobenius(s.reconstruct() - a.matrix());
  if (err > 1e-10 * (1.0 + frobenius(a.matrix())))
    throw std::invalid_argument("bd_decompose: spectrum does not diagonalize the matrix");
}

// One-exception case on eigenvalues multiplied by `sign`: after the sign
// flip, every eigenvalue but `top` is <= 0 and `top` is > 0.
void one_exception(const Vector& values, const MatrixMN& vectors, const std::vector<std::size_t>& minority,
                   std::size_t top, double sign, std::vector<RankOnePiece>& out) {
  double total = 0.0;
  for (std::size_t j : minority) total += sign * values[j];
  const double lambda_n = sign * values[top];
  const Vector e_n = vectors.col(top);
  for (std::size_t j : minority) {
    const double lambda_j = sign * values[j];
    const double delta = lambda_j / total;
    const double a = std::sqrt(std::abs(lambda_j));
    const double b = std::sqrt(delta * lambda_n);
    const Vector e_j = vectors.col(j);
    RankOnePiece p{Vector(e_j.size()), Vector(e_j.size()), true, PieceTag::one_sign_off};
    for (std::size_t i = 0; i < e_j.size(); ++i) {
      p.left[i] = sign * (-a * e_j[i] + b * e_n[i]);
      p.right[i] = a * e_j[i] + b * e_n[i];
    }
    out.push_back(std::move(p));
  }
}

}  // namespace

Decomposition bd_decompose(const SymMatrix& a) { return bd_decompose(a, eigen_sym(a)); }

Decomposition bd_decompose(const SymMatrix& a, const Spectrum& spectrum) {
  check_spectrum(a, spectrum);
  const std::size_t n = a.dim();
  const double snap = snap_threshold(a.matrix());
  Vector values = spectrum.values;
  for (double& v : values)
    if (std::abs(v) <= snap) v = 0.0;

  std::vector<std::size_t> neg, pos;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] < 0.0) neg.push_back(i);
    if (values[i] > 0.0) pos.push_back(i);
  }

  Decomposition d{{}, a.matrix()};
  if (neg.empty() || pos.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (values[i] == 0.0) continue;
      const Vector e = spectrum.vector(i);
      d.pieces.push_back({scaled(e, values[i]), e, true, PieceTag::same_sign});
    }
    return d;
  }
  if (pos.size() == 1) {
    one_exception(values, spectrum.vectors, neg, pos.front(), 1.0, d.pieces);
    return d;
  }
  if (neg.size() == 1) {
    one_exception(values, spectrum.vectors, pos, neg.front(), -1.0, d.pieces);
    return d;
  }

  // r = #negatives >= 2 and #positives >= 2: one block per positive
  // eigenvalue, each a (r+1)-dimensional problem with a single positive
  // eigenvalue, embedded back through e_1..e_r, e_j.
  const std::size_t r = neg.size();
  double total_pos = 0.0;
  for (std::size_t j : pos) total_pos += values[j];
  for (std::size_t j : pos) {
    const double aj = values[j] / total_pos;
    Vector block(r + 1);
    for (std::size_t l = 0; l < r; ++l) block[l] = aj * values[neg[l]];
    block[r] = values[j];
    const SymMatrix hat = SymMatrix::diagonal(block);
    const Decomposition sub = bd_decompose(hat, Spectrum{block, MatrixMN::identity(r + 1)});
    for (const RankOnePiece& p : sub.pieces) {
      RankOnePiece q{Vector(n, 0.0), Vector(n, 0.0), true, p.tag};
      for (std::size_t l = 0; l <= r; ++l) {
        const Vector e = spectrum.vector(l < r ? neg[l] : j);
        for (std::size_t i = 0; i < n; ++i) {
          q.left[i] += p.left[l] * e[i];
          q.right[i] += p.right[l] * e[i];
        }
      }
      d.pieces.push_back(std::move(q));
    }
  }
  return d;
}

Decomposition bv_decompose(const MatrixMN& a) {
  const PolarFactors f = polar(a);
  Decomposition d{{}, a};
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const double s = f.singular_values[k];
    if (s == 0.0) continue;
    const Vector e = f.right_vectors.col(k);
    const Vector re = f.r.apply(e);
    d.pieces.push_back({scaled(re, s), e, false, PieceTag::general});
  }
  return d;
}

}  // namespace lamina
