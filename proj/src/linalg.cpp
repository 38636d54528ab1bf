#include "lamina/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace lamina {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

Vector scaled(std::span<const double> a, double s) {
  Vector r(a.begin(), a.end());
  for (double& x : r) x *= s;
  return r;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("add: size mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vector sub(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub: size mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

int canonical_sign(std::span<const double> v) {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs + 1e-9) {
      best = i;
      best_abs = a;
    }
  }
  if (best_abs <= 0.0) return 1;
  return v[best] < 0.0 ? -1 : 1;
}

Vector canonical(std::span<const double> v) {
  return scaled(v, static_cast<double>(canonical_sign(v)));
}

// ---------------------------------------------------------------------------
// MatrixMN

MatrixMN::MatrixMN(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("MatrixMN: empty shape");
}

MatrixMN::MatrixMN(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("MatrixMN: empty shape");
  if (data_.size() != rows * cols) throw std::invalid_argument("MatrixMN: entry count mismatch");
  for (double x : data_)
    if (!std::isfinite(x)) throw std::invalid_argument("MatrixMN: non-finite entry");
}

MatrixMN::MatrixMN(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("MatrixMN: empty shape");
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("MatrixMN: ragged rows");
    for (double x : r) {
      if (!std::isfinite(x)) throw std::invalid_argument("MatrixMN: non-finite entry");
      data_.push_back(x);
    }
  }
}

MatrixMN MatrixMN::identity(std::size_t n) {
  MatrixMN m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

MatrixMN MatrixMN::diagonal(std::span<const double> d) {
  MatrixMN m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vector MatrixMN::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vector MatrixMN::col(std::size_t j) const {
  Vector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

MatrixMN MatrixMN::transpose() const {
  MatrixMN t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Vector MatrixMN::apply(std::span<const double> x) const {
  if (x.size() != cols_) throw std::invalid_argument("MatrixMN::apply: size mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

MatrixMN& MatrixMN::operator+=(const MatrixMN& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("MatrixMN +: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

MatrixMN& MatrixMN::operator-=(const MatrixMN& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("MatrixMN -: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

MatrixMN& MatrixMN::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

MatrixMN operator*(const MatrixMN& a, const MatrixMN& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("MatrixMN *: shape mismatch");
  MatrixMN c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(std::size_t n) : m_(n, n) {}

SymMatrix::SymMatrix(const MatrixMN& a) : m_(a.rows(), a.cols()) {
  if (!a.square()) throw std::invalid_argument("SymMatrix: matrix is not square");
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = a(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      m_(i, j) = v;
      m_(j, i) = v;
    }
  }
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : SymMatrix(MatrixMN(rows)) {}

SymMatrix SymMatrix::diagonal(std::span<const double> d) {
  return SymMatrix(MatrixMN::diagonal(d));
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  m_(i, j) = v;
  m_(j, i) = v;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += m_(i, i);
  return t;
}

MatrixMN skew_part(const MatrixMN& a) {
  if (!a.square()) throw std::invalid_argument("skew_part: matrix is not square");
  MatrixMN s(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = 0.5 * (a(i, j) - a(j, i));
  return s;
}

MatrixMN Spectrum::reconstruct() const {
  const std::size_t n = values.size();
  MatrixMN r(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r(i, j) += values[k] * vectors(i, k) * vectors(j, k);
  return r;
}

namespace {

double frobenius_of(const MatrixMN& a) { return norm(a.data()); }

double off_diagonal(const MatrixMN& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// Sorts ascending (stable), fixes the sign of every eigenvector and snaps
// near-zero eigenvalues.
Spectrum finalize(Vector values, const MatrixMN& vectors, double snap) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  Spectrum s{Vector(n), MatrixMN(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    const double lambda = values[src];
    s.values[k] = std::abs(lambda) <= snap ? 0.0 : lambda;
    Vector v = vectors.col(src);
    const double sign = canonical_sign(v);
    for (std::size_t i = 0; i < n; ++i) s.vectors(i, k) = sign * v[i];
  }
  return s;
}

Spectrum diagonal_spectrum(const SymMatrix& a, double snap) {
  const std::size_t n = a.dim();
  Vector values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  return finalize(std::move(values), MatrixMN::identity(n), snap);
}

Spectrum eigen_2x2(const SymMatrix& a, double snap) {
  const double p = a(0, 0), b = a(0, 1), c = a(1, 1);
  const double d = 0.5 * (p - c);
  const double r = std::hypot(d, b);
  const double mid = 0.5 * (p + c);
  const double det = p * c - b * b;
  double hi = 0.0, lo = 0.0;
  if (mid >= 0.0) {
    hi = mid + r;
    lo = hi != 0.0 ? det / hi : mid - r;
  } else {
    lo = mid - r;
    hi = lo != 0.0 ? det / lo : mid + r;
  }
  // eigenvector for `hi`, written without cancellation
  double vx = 0.0, vy = 0.0;
  if (d > 0.0) {
    vx = d + r;
    vy = b;
  } else {
    vx = b;
    vy = r - d;
  }
  const double len = std::hypot(vx, vy);
  vx /= len;
  vy /= len;
  MatrixMN vecs(2, 2);
  vecs(0, 0) = -vy;
  vecs(1, 0) = vx;
  vecs(0, 1) = vx;
  vecs(1, 1) = vy;
  return finalize({lo, hi}, vecs, snap);
}

Vector cross3(std::span<const double> a, std::span<const double> b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double det3(const MatrixMN& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// Cardano (trigonometric form) with one Newton step on det(A - lambda I).
// Returns false when the spectrum is too clustered for cross-product
// eigenvectors, leaving the caller to fall back to Jacobi.
bool eigen_3x3(const SymMatrix& a, double snap, Spectrum& out) {
  const MatrixMN& m = a.matrix();
  const double scale = frobenius_of(m);
  const double q = a.trace() / 3.0;
  const double p1 = m(0, 1) * m(0, 1) + m(0, 2) * m(0, 2) + m(1, 2) * m(1, 2);
  const double p2 = (m(0, 0) - q) * (m(0, 0) - q) + (m(1, 1) - q) * (m(1, 1) - q) +
                    (m(2, 2) - q) * (m(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  if (p <= 1e-3 * scale) return false;
  MatrixMN b = m;
  for (std::size_t i = 0; i < 3; ++i) b(i, i) -= q;
  b *= 1.0 / p;
  const double r = std::clamp(det3(b) / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  double ev[3];
  ev[2] = q + 2.0 * p * std::cos(phi);
  ev[0] = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  ev[1] = 3.0 * q - ev[0] - ev[2];

  for (double& lambda : ev) {
    MatrixMN s = m;
    for (std::size_t i = 0; i < 3; ++i) s(i, i) -= lambda;
    const double f = det3(s);
    const double df = -((s(1, 1) * s(2, 2) - s(1, 2) * s(2, 1)) + (s(0, 0) * s(2, 2) - s(0, 2) * s(2, 0)) +
                        (s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0)));
    if (std::abs(df) > 1e-8 * scale * scale) lambda -= f / df;
  }
  std::sort(ev, ev + 3);
  if (ev[1] - ev[0] < 1e-3 * scale || ev[2] - ev[1] < 1e-3 * scale) return false;

  MatrixMN vecs(3, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    MatrixMN s = m;
    for (std::size_t i = 0; i < 3; ++i) s(i, i) -= ev[k];
    const Vector r0 = s.row(0), r1 = s.row(1), r2 = s.row(2);
    Vector best = cross3(r0, r1);
    for (const Vector& c : {cross3(r0, r2), cross3(r1, r2)})
      if (norm(c) > norm(best)) best = c;
    const double len = norm(best);
    if (len <= 0.0) return false;
    for (std::size_t i = 0; i < 3; ++i) vecs(i, k) = best[i] / len;
  }
  // orthonormalize the extreme eigenvectors; the middle one is their cross product
  Vector e0 = vecs.col(0), e2 = vecs.col(2);
  const double c02 = dot(e0, e2);
  for (std::size_t i = 0; i < 3; ++i) e2[i] -= c02 * e0[i];
  const double l2 = norm(e2);
  for (double& x : e2) x /= l2;
  Vector e1 = cross3(e2, e0);
  for (std::size_t i = 0; i < 3; ++i) {
    vecs(i, 0) = e0[i];
    vecs(i, 1) = e1[i];
    vecs(i, 2) = e2[i];
  }
  out = finalize({ev[0], ev[1], ev[2]}, vecs, 0.0);
  MatrixMN err = out.reconstruct() - m;
  if (frobenius_of(err) > 1e-12 * (1.0 + scale)) return false;
  for (double& v : out.values)
    if (std::abs(v) <= snap) v = 0.0;
  return true;
}

}  // namespace

double snap_threshold(const MatrixMN& a) { return kSnapTolerance * (1.0 + frobenius_of(a)); }

Spectrum eigen_sym_jacobi(const SymMatrix& a) {
  const std::size_t n = a.dim();
  MatrixMN w = a.matrix();
  MatrixMN v = MatrixMN::identity(n);
  const double scale = frobenius_of(w);
  const double tol = 1e-14 * scale;
  for (int sweep = 0; sweep < 100 && off_diagonal(w) > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = w(p, q);
        if (apq == 0.0) continue;
        const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double wkp = w(k, p), wkq = w(k, q);
          w(k, p) = c * wkp - s * wkq;
          w(k, q) = s * wkp + c * wkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double wpk = w(p, k), wqk = w(q, k);
          w(p, k) = c * wpk - s * wqk;
          w(q, k) = s * wpk + c * wqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  Vector values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = w(i, i);
  return finalize(std::move(values), v, snap_threshold(a.matrix()));
}

Spectrum eigen_sym(const SymMatrix& a) {
  const std::size_t n = a.dim();
  const double snap = snap_threshold(a.matrix());
  const double scale = frobenius_of(a.matrix());
  if (n == 1 || off_diagonal(a.matrix()) <= 1e-14 * scale) return diagonal_spectrum(a, snap);
  if (n == 2) return eigen_2x2(a, snap);
  if (n == 3) {
    Spectrum s;
    if (eigen_3x3(a, snap, s)) return s;
  }
  return eigen_sym_jacobi(a);
}

// ---------------------------------------------------------------------------
// One-sided (Hestenes) Jacobi SVD: orthogonalize the columns of A by plane
// rotations applied on the right. Relative accuracy holds for small singular
// values, which the rank-one identities rely on.

Svd svd(const MatrixMN& a) {
  const std::size_t m = a.rows(), n = a.cols();
  std::vector<Vector> cols(n);
  for (std::size_t j = 0; j < n; ++j) cols[j] = a.col(j);
  MatrixMN v = MatrixMN::identity(n);

  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = dot(cols[p], cols[p]);
        const double beta = dot(cols[q], cols[q]);
        const double gamma = dot(cols[p], cols[q]);
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = cols[p][i], y = cols[q][i];
          cols[p][i] = c * x - s * y;
          cols[q][i] = s * x + c * y;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double x = v(i, p), y = v(i, q);
          v(i, p) = c * x - s * y;
          v(i, q) = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  Vector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm(cols[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double snap = snap_threshold(a);
  Svd out{Vector(n), MatrixMN(m, n), MatrixMN(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    const Vector vk = v.col(src);
    const double sign = canonical_sign(vk);
    const double s = sigma[src] <= snap ? 0.0 : sigma[src];
    out.values[k] = s;
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = sign * vk[i];
    if (s > 0.0)
      for (std::size_t i = 0; i < m; ++i) out.u(i, k) = sign * cols[src][i] / sigma[src];
  }
  return out;
}

PolarFactors polar(const MatrixMN& a) {
  const std::size_t m = a.rows(), n = a.cols();
  Svd s = svd(a);
  // complete the left vectors of zero singular values when possible
  if (m >= n) {
    std::vector<Vector> basis;
    for (std::size_t k = 0; k < n; ++k)
      if (s.values[k] > 0.0) basis.push_back(s.u.col(k));
    std::size_t candidate = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (s.values[k] > 0.0) continue;
      while (candidate < m) {
        Vector e(m, 0.0);
        e[candidate++] = 1.0;
        for (int pass = 0; pass < 2; ++pass)
          for (const Vector& b : basis) {
            const double c = dot(e, b);
            for (std::size_t i = 0; i < m; ++i) e[i] -= c * b[i];
          }
        const double len = norm(e);
        if (len > 1e-6) {
          for (double& x : e) x /= len;
          basis.push_back(e);
          for (std::size_t i = 0; i < m; ++i) s.u(i, k) = e[i];
          break;
        }
      }
    }
  }
  PolarFactors f{MatrixMN(m, n), SymMatrix(n), s.values, s.v};
  MatrixMN u(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) f.r(i, j) += s.u(i, k) * s.v(j, k);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) u(i, j) += s.values[k] * s.v(i, k) * s.v(j, k);
  f.u = SymMatrix(u);
  return f;
}

// ---------------------------------------------------------------------------

namespace {

struct Lu {
  MatrixMN lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool singular = false;
};

Lu factor(const MatrixMN& m) {
  if (!m.square()) throw std::invalid_argument("LU: matrix is not square");
  const std::size_t n = m.rows();
  Lu f{m, std::vector<std::size_t>(n), 1, false};
  std::iota(f.perm.begin(), f.perm.end(), 0);
  double scale = 0.0;
  for (double x : m.data()) scale = std::max(scale, std::abs(x));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(f.lu(i, k)) > std::abs(f.lu(piv, k))) piv = i;
    if (std::abs(f.lu(piv, k)) <= 1e-14 * scale || scale == 0.0) {
      f.singular = true;
      return f;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = f.lu(i, k) / f.lu(k, k);
      f.lu(i, k) = l;
      for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
    }
  }
  return f;
}

}  // namespace

MatrixMN solve(const MatrixMN& m, const MatrixMN& b) {
  if (b.rows() != m.rows()) throw std::invalid_argument("solve: shape mismatch");
  const Lu f = factor(m);
  if (f.singular) throw std::domain_error("solve: singular matrix");
  const std::size_t n = m.rows(), r = b.cols();
  MatrixMN x(n, r);
  for (std::size_t c = 0; c < r; ++c) {
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = b(f.perm[i], c);
      for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
      y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = y[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x(j, c);
      x(i, c) = s / f.lu(i, i);
    }
  }
  return x;
}

MatrixMN inverse(const MatrixMN& m) { return solve(m, MatrixMN::identity(m.rows())); }

double determinant(const MatrixMN& m) {
  const Lu f = factor(m);
  if (f.singular) return 0.0;
  double d = f.sign;
  for (std::size_t i = 0; i < m.rows(); ++i) d *= f.lu(i, i);
  return d;
}

}  // namespace lamina
