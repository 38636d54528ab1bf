#include "lamina/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lamina {

double frobenius(const MatrixMN& a) { return norm(a.data()); }

double schatten1(const MatrixMN& a) {
  double s = 0.0;
  for (double v : svd(a).values) s += v;
  return s;
}

double schatten_inf(const MatrixMN& a) { return svd(a).values.front(); }

double ssym(const Spectrum& s) {
  double neg = 0.0, pos = 0.0;
  for (double l : s.values) {
    if (l <= 0.0)
      neg += l;
    else
      pos += l;
  }
  return std::hypot(neg, pos);
}

double ssym(const SymMatrix& a) { return ssym(eigen_sym(a)); }

double ssym_definition(const SymMatrix& a) {
  double s1 = 0.0;
  for (double l : eigen_sym(a).values) s1 += std::abs(l);
  const double tr = a.trace();
  return std::sqrt(0.5 * s1 * s1 + 0.5 * tr * tr);
}

double ssym_2d(const SymMatrix& a) {
  if (a.dim() != 2) throw std::invalid_argument("ssym_2d: matrix must be 2x2");
  const double f2 = a(0, 0) * a(0, 0) + 2.0 * a(0, 1) * a(0, 1) + a(1, 1) * a(1, 1);
  const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
  return std::sqrt(f2 + 2.0 * std::max(det, 0.0));
}

double div_norm3_branch_small(double l1, double l2, double l3) {
  const double s = std::abs(l1) + std::abs(l2);
  return std::hypot(s, l3);
}

double div_norm3_branch_large(double l1, double l2, double l3) {
  return (std::abs(l1) + std::abs(l2) + std::abs(l3)) / std::sqrt(2.0);
}

double div_norm3_from_eigenvalues(double l1, double l2, double l3) {
  std::array<double, 3> l{l1, l2, l3};
  std::sort(l.begin(), l.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  if (std::abs(l[0]) + std::abs(l[1]) <= std::abs(l[2])) return div_norm3_branch_small(l[0], l[1], l[2]);
  return div_norm3_branch_large(l[0], l[1], l[2]);
}

double div_norm(const SymMatrix& a) {
  if (a.dim() == 2) return schatten1(a.matrix());
  if (a.dim() != 3) throw std::invalid_argument("div_norm: only n = 2 and n = 3 are supported");
  const Spectrum s = eigen_sym(a);
  return div_norm3_from_eigenvalues(s.values[0], s.values[1], s.values[2]);
}

std::string_view to_string(Norm n) {
  switch (n) {
    case Norm::frobenius:
      return "frobenius";
    case Norm::schatten1:
      return "schatten1";
    case Norm::ssym:
      return "ssym";
  }
  return "?";
}

Norm parse_norm(std::string_view name) {
  if (name == "frobenius") return Norm::frobenius;
  if (name == "schatten1" || name == "schatten") return Norm::schatten1;
  if (name == "ssym") return Norm::ssym;
  throw std::invalid_argument("unknown norm '" + std::string(name) + "'");
}

double evaluate(Norm which, const MatrixMN& a) {
  switch (which) {
    case Norm::frobenius:
      return frobenius(a);
    case Norm::schatten1:
      return schatten1(a);
    case Norm::ssym:
      if (!a.square()) throw std::invalid_argument("ssym: matrix is not square");
      return ssym(SymMatrix(a));
  }
  throw std::logic_error("evaluate: bad norm selector");
}

}  // namespace lamina
