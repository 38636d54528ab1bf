#pragma once
//
// Matrix norms: Frobenius, Schatten-1 (nuclear), Schatten-infinity
// (spectral), the symmetric Schatten-1 norm and the divergence-cone norm.
//

#include "lamina/linalg.hpp"

#include <string_view>

namespace lamina {

double frobenius(const MatrixMN& a);
double schatten1(const MatrixMN& a);
double schatten_inf(const MatrixMN& a);

// Symmetric Schatten-1 norm, positive/negative split form:
//   sqrt((sum_{lambda<=0} lambda)^2 + (sum_{lambda>0} lambda)^2).
double ssym(const SymMatrix& a);
double ssym(const Spectrum& s);

// Same norm written as sqrt(S1(A)^2 / 2 + tr(A)^2 / 2); kept separately so
// both algebraic routes can be compared.
double ssym_definition(const SymMatrix& a);

// Two-dimensional closed form sqrt(|A|^2 + 2 det(A)^+). Throws
// std::invalid_argument unless dim == 2.
double ssym_2d(const SymMatrix& a);

// Norm of the divergence-free wave cone. n = 2 coincides with Schatten-1.
// n = 3 is the two-branch formula on eigenvalues ordered by magnitude; it is
// a conjectured closed form, not a proven convexification.
// Throws std::invalid_argument for n outside {2, 3}.
double div_norm(const SymMatrix& a);
double div_norm3_from_eigenvalues(double l1, double l2, double l3);
double div_norm3_branch_small(double l1, double l2, double l3);  // |l1|+|l2| <= |l3|
double div_norm3_branch_large(double l1, double l2, double l3);  // |l1|+|l2| >  |l3|

enum class Norm { frobenius, schatten1, ssym };

std::string_view to_string(Norm n);
Norm parse_norm(std::string_view name);

// Evaluates `which` on a square or rectangular matrix. ssym requires a
// square matrix and uses its symmetric part.
double evaluate(Norm which, const MatrixMN& a);

}  // namespace lamina
