#pragma once
//
// Simplices, hyperplane slices and Kuhn triangulations of boxes.
//
// Hyperplanes are always {x : d . x = t} with |d| = 1, so slice measures are
// (n-1)-dimensional Hausdorff measures and the co-area formula needs no
// Jacobian.
//

#include "lamina/linalg.hpp"
#include "lamina/norms.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace lamina {

using Point = Vector;

class Simplex {
 public:
  Simplex() = default;
  // Throws std::invalid_argument when the vertex count is not n + 1 or the
  // simplex is degenerate (|det| <= 1e-14 scale^n).
  explicit Simplex(std::vector<Point> vertices);

  std::size_t dim() const { return vertices_.size() - 1; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& vertex(std::size_t i) const { return vertices_[i]; }

  double volume() const;
  double diameter() const;
  Point centroid() const;

  // Barycentric coordinates (n + 1 entries, summing to one).
  Vector barycentric(std::span<const double> x) const;
  bool contains(std::span<const double> x, double tol = 1e-12) const;

  // Vertices of the facet opposite vertex i and its unit normal pointing
  // away from vertex i.
  std::vector<Point> facet(std::size_t i) const;
  Vector outward_normal(std::size_t i) const;

  // Image of a point of the unit cube: sorting the coordinates picks one of
  // the n! Kuhn simplices, each mapped affinely onto this simplex. Uniform
  // input gives uniform output.
  Point from_unit_cube(std::span<const double> u) const;

 private:
  std::vector<Point> vertices_;
};

// Convex polytope of affine dimension d <= 2 embedded in R^ambient; vertices
// are stored in boundary order (a single point, a segment, or a polygon).
class ConvexPolytope {
 public:
  ConvexPolytope() = default;
  ConvexPolytope(std::size_t ambient, std::vector<Point> ordered_vertices);

  std::size_t ambient() const { return ambient_; }
  std::size_t affine_dim() const;
  const std::vector<Point>& vertices() const { return vertices_; }
  bool empty() const { return vertices_.empty(); }

  double measure() const;  // length for d = 1, area for d = 2, 0 otherwise
  Point centroid() const;  // centroid of the measure (vertex mean when d = 0)

 private:
  std::size_t ambient_ = 0;
  std::vector<Point> vertices_;
};

struct Box {
  Point lo;
  Point hi;

  std::size_t dim() const { return lo.size(); }
  double volume() const;
};

// Interior face shared by two cells. `facet` is the local index (the
// opposite vertex) in each cell; the normal points from `cell` to
// `neighbour`.
struct MeshFace {
  std::size_t cell;
  std::size_t facet;
  std::size_t neighbour;
  std::size_t neighbour_facet;
};

class Triangulation {
 public:
  static constexpr std::int64_t kBoundary = -1;

  Triangulation() = default;
  Triangulation(std::size_t n, std::vector<Point> points, std::vector<std::vector<std::size_t>> cells);

  std::size_t dim() const { return n_; }
  std::size_t cell_count() const { return cells_.size(); }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<std::vector<std::size_t>>& cell_indices() const { return cells_; }
  const Simplex& cell(std::size_t i) const { return simplices_[i]; }

  // neighbour(c, i): cell across the facet opposite local vertex i, or -1.
  std::int64_t neighbour(std::size_t c, std::size_t i) const { return neighbours_[c][i]; }
  std::vector<bool> exterior_facets(std::size_t c) const;
  const std::vector<MeshFace>& interior_faces() const { return faces_; }

  double mesh_size() const { return delta_; }          // max cell diameter
  double regularity_constant() const { return c_; }    // min vol / delta^n
  Box bounding_box() const;
  double total_volume() const;

  // Linear scan; returns the first cell containing x (closed cells).
  std::optional<std::size_t> locate(std::span<const double> x) const;

 private:
  std::size_t n_ = 0;
  std::vector<Point> points_;
  std::vector<std::vector<std::size_t>> cells_;
  std::vector<Simplex> simplices_;
  std::vector<std::vector<std::int64_t>> neighbours_;
  std::vector<MeshFace> faces_;
  double delta_ = 0.0;
  double c_ = 0.0;
};

// Kuhn subdivision: each grid cube is split into n! simplices
// conv{v_0, v_0 + h e_p(1), ..., v_0 + h e_p(1) + ... + h e_p(n)}, one per
// permutation p. Throws std::invalid_argument for zero subdivisions or
// n outside {2, 3}.
Triangulation freudenthal_mesh(const Box& box, std::size_t subdivisions);

// Per-cell affine data u(x) = A_i x + b_i on a triangulation.
struct PiecewiseAffineField {
  Triangulation mesh;
  std::size_t m = 0;
  std::vector<MatrixMN> a;
  std::vector<Vector> b;
  bool continuous = false;

  Vector evaluate_on(std::size_t cell, std::span<const double> x) const;
  std::optional<Vector> evaluate(std::span<const double> x) const;
};

using FieldFn = std::function<Vector(std::span<const double>)>;

// Affine map matching `values` at the simplex vertices.
std::pair<MatrixMN, Vector> affine_fit(const Simplex& s, const std::vector<Vector>& values);

// Lagrange (P1) interpolation of f at the mesh points.
PiecewiseAffineField interpolate(const FieldFn& f, const Triangulation& mesh);

// Largest mismatch of the per-cell affine maps at shared mesh points.
double continuity_defect(const PiecewiseAffineField& u);

// (n-1)-measure of cell /\ {d . x = t}, closed-cell semantics. Exact for
// n = 2 (segment) and n = 3 (polygon); for n >= 4 the slice density of the
// uniform distribution on the simplex is used, which is exact for distinct
// vertex heights and perturbs ties by 1e-9 relative. Throws
// std::invalid_argument when |d| differs from 1 by more than 1e-12.
double slice_measure(const Simplex& cell, std::span<const double> d, double t);

// The slice itself (n in {2, 3}); empty when the hyperplane misses the cell.
ConvexPolytope slice(const Simplex& cell, std::span<const double> d, double t);

// sum over integers l of (1/k) slice_measure(cell, d, l/k).
double coarea_sum(const Simplex& cell, std::span<const double> d, int k);

// Family of parallel hyperplanes {d . x = l / k}.
struct CutFamily {
  Vector direction;
  int k = 1;
};

enum class JumpProduct { tensor, symmetric };

struct FaceIntegral {
  double value = 0.0;
  std::size_t pieces = 0;
  bool monte_carlo = false;
  double standard_error = 0.0;
};

inline constexpr std::size_t kFacePieceCap = 100000;

// Partitions a codimension-one face by every hyperplane of `cuts`, evaluates
// jump(x) at a point interior to each piece and returns
//   sum_pieces measure(piece) * N(jump (x) nu)      (or jump (.) nu).
// Past kFacePieceCap pieces the integral is estimated by Monte Carlo with
// `mc_samples` points and a reported standard error.
FaceIntegral face_partition_integral(const ConvexPolytope& face, std::span<const double> normal,
                                     const std::vector<CutFamily>& cuts, const FieldFn& jump, Norm norm,
                                     JumpProduct product, std::size_t mc_samples = 100000,
                                     std::uint64_t seed = 0);

}  // namespace lamina
