#pragma once
//
// Staircase laminates: u_k(x) = M x + b + sum_j c_j s_k(d_j . x) with the
// floor staircase s_k(t) = floor(k t) / k. Each term jumps by c_j / k across
// every hyperplane {d_j . x = l / k}, so Du_k restricted to a cell is a sum of
// rank-one (or symmetric rank-one) matrices carried by hyperplane families
// and its variation can be computed exactly from slice measures.
//

#include "lamina/geometry.hpp"
#include "lamina/linalg.hpp"
#include "lamina/norms.hpp"
#include "lamina/rank_one.hpp"

#include <optional>
#include <vector>

namespace lamina {

// floor(k t) / k, corrected so that s <= t < s + 1/k holds in floating
// point as well.
double step_eval(int k, double t);

struct StaircaseTerm {
  Vector c;
  Vector d;  // unit
  int k = 1;
};

enum class LaminateMode { bv, bd };

struct StaircaseField {
  std::size_t n = 0;
  std::size_t m = 0;
  LaminateMode mode = LaminateMode::bv;
  MatrixMN affine;  // zero in BV mode, skew part of A in BD mode
  Vector b;
  std::vector<StaircaseTerm> terms;

  Vector eval(std::span<const double> x) const;

  // Value just on the negative side of every term's hyperplane through x,
  // i.e. at x - eps d_hat with d_hat the canonical orientation of the term
  // direction and eps = 1e-9 / k. Used for traces on faces that lie inside
  // a lattice hyperplane: the jump across such a hyperplane is counted by
  // the cell on its positive side.
  Vector eval_displaced(std::span<const double> x) const;

  // Jump matrix carried by a hyperplane with normal d_hat when the field
  // value increases by `jump` across it.
  MatrixMN jump_matrix(std::span<const double> jump, std::span<const double> d_hat) const;
};

// Sum_i s_k(x . e_i) s_i R e_i + b from the polar decomposition of A.
StaircaseField build_bv_laminate(const MatrixMN& a, std::span<const double> b, int k);

// Symmetric part through bd_decompose; each piece alpha (.) beta becomes
//   (alpha |beta| / 2) s_k(beta_hat . x) + (beta |alpha| / 2) s_k(alpha_hat . x),
// a single term when alpha and beta are parallel, and lambda s_k(e . x) e
// for same-sign pieces. The skew part and b stay affine.
StaircaseField build_bd_laminate(const MatrixMN& a, std::span<const double> b, int k);
StaircaseField build_bd_laminate(const MatrixMN& a, std::span<const double> b, int k, const Spectrum& spectrum);

inline constexpr double kParallelSine = 1e-10;
inline constexpr double kDirectionTolerance = 1e-12;
inline constexpr double kOffsetTolerance = 1e-12;

// Variation of Du_k (BV) or Eu_k (BD) on a closed cell under `norm`.
// Terms are grouped by direction up to sign; jumps on the same hyperplane
// are added before the norm is applied. A hyperplane passing within 1e-12
// of a vertex is evaluated at offset + 1e-9 / k, so a hyperplane through a
// facet belongs to the cell on its positive side. Hyperplanes that contain
// a facet flagged in `exterior_facets` are dropped (they lie on the domain
// boundary).
double variation_on_cell(const StaircaseField& field, const Simplex& cell, Norm norm,
                         const std::vector<bool>& exterior_facets = {});

// Hyperplane families of the field, one per distinct (direction, k).
std::vector<CutFamily> cut_families(const StaircaseField& field);

struct SupError {
  double bound = 0.0;      // sum_j |c_j| / k
  double empirical = 0.0;  // max over quasi-random points of the cell
};

SupError sup_error(const StaircaseField& field, const MatrixMN& a, std::span<const double> b, const Simplex& region,
                   std::size_t samples = 10000);

}  // namespace lamina
