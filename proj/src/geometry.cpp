#include "lamina/geometry.hpp"

#include "lamina/random.hpp"
#include "lamina/rank_one.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace lamina {

namespace {

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

MatrixMN edge_matrix(const std::vector<Point>& v) {
  const std::size_t n = v.size() - 1;
  MatrixMN e(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) e(i, j) = v[j + 1][i] - v[0][i];
  return e;
}

Vector cross3(std::span<const double> a, std::span<const double> b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double triangle_area(std::span<const double> a, std::span<const double> b, std::span<const double> c) {
  const Vector u = sub(b, a), w = sub(c, a);
  const double uu = dot(u, u), ww = dot(w, w), uw = dot(u, w);
  return 0.5 * std::sqrt(std::max(0.0, uu * ww - uw * uw));
}

// Orthonormal basis of the complement of a unit vector in R^3.
std::pair<Vector, Vector> plane_basis(std::span<const double> d) {
  std::size_t smallest = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(d[i]) < std::abs(d[smallest])) smallest = i;
  Vector e(3, 0.0);
  e[smallest] = 1.0;
  Vector u = cross3(d, e);
  u = scaled(u, 1.0 / norm(u));
  return {u, cross3(d, u)};
}

void check_unit(std::span<const double> d) {
  if (std::abs(norm(d) - 1.0) > 1e-12) throw std::invalid_argument("hyperplane direction must be a unit vector");
}

double height_tolerance(const std::vector<double>& h) {
  double s = 0.0;
  for (double x : h) s = std::max(s, std::abs(x));
  return 1e-13 * (1.0 + s);
}

}  // namespace

// ---------------------------------------------------------------- Simplex

Simplex::Simplex(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw std::invalid_argument("Simplex: need at least two vertices");
  const std::size_t n = vertices_.size() - 1;
  for (const Point& p : vertices_)
    if (p.size() != n) throw std::invalid_argument("Simplex: vertex count must be dim + 1");
  const double scale = diameter();
  if (std::abs(determinant(edge_matrix(vertices_))) <= 1e-14 * std::pow(scale, static_cast<double>(n)))
    throw std::invalid_argument("Simplex: degenerate");
}

double Simplex::volume() const {
  return std::abs(determinant(edge_matrix(vertices_))) / factorial(dim());
}

double Simplex::diameter() const {
  double d = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) d = std::max(d, norm(sub(vertices_[i], vertices_[j])));
  return d;
}

Point Simplex::centroid() const {
  Point c(dim(), 0.0);
  for (const Point& p : vertices_)
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += p[i];
  return scaled(c, 1.0 / static_cast<double>(vertices_.size()));
}

Vector Simplex::barycentric(std::span<const double> x) const {
  const std::size_t n = dim();
  MatrixMN rhs(n, 1);
  for (std::size_t i = 0; i < n; ++i) rhs(i, 0) = x[i] - vertices_[0][i];
  const MatrixMN l = solve(edge_matrix(vertices_), rhs);
  Vector out(n + 1);
  double rest = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i + 1] = l(i, 0);
    rest -= l(i, 0);
  }
  out[0] = rest;
  return out;
}

bool Simplex::contains(std::span<const double> x, double tol) const {
  const Vector l = barycentric(x);
  return std::all_of(l.begin(), l.end(), [tol](double v) { return v >= -tol; });
}

std::vector<Point> Simplex::facet(std::size_t i) const {
  std::vector<Point> f;
  for (std::size_t j = 0; j < vertices_.size(); ++j)
    if (j != i) f.push_back(vertices_[j]);
  return f;
}

Vector Simplex::outward_normal(std::size_t i) const {
  // gradient of the barycentric coordinate of vertex i points into the cell
  const MatrixMN inv = inverse(edge_matrix(vertices_));
  const std::size_t n = dim();
  Vector g(n, 0.0);
  if (i == 0) {
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) g[c] -= inv(r, c);
  } else {
    g = inv.row(i - 1);
  }
  return scaled(g, -1.0 / norm(g));
}

Point Simplex::from_unit_cube(std::span<const double> u) const {
  const std::size_t n = dim();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });
  Vector lambda(n + 1);
  lambda[0] = 1.0 - u[order[0]];
  for (std::size_t i = 1; i < n; ++i) lambda[i] = u[order[i - 1]] - u[order[i]];
  lambda[n] = u[order[n - 1]];
  Point p(n, 0.0);
  for (std::size_t v = 0; v <= n; ++v)
    for (std::size_t i = 0; i < n; ++i) p[i] += lambda[v] * vertices_[v][i];
  return p;
}

// --------------------------------------------------------- ConvexPolytope

ConvexPolytope::ConvexPolytope(std::size_t ambient, std::vector<Point> ordered_vertices)
    : ambient_(ambient), vertices_(std::move(ordered_vertices)) {
  for (const Point& p : vertices_)
    if (p.size() != ambient_) throw std::invalid_argument("ConvexPolytope: vertex dimension mismatch");
  if (vertices_.size() >= 3) {
    // every vertex must be extreme: the polygon turns the same way everywhere
    const std::size_t k = vertices_.size();
    Vector ref;
    for (std::size_t i = 0; i < k; ++i) {
      const Vector a = sub(vertices_[(i + 1) % k], vertices_[i]);
      const Vector b = sub(vertices_[(i + 2) % k], vertices_[(i + 1) % k]);
      const double ab = dot(a, b), aa = dot(a, a), bb = dot(b, b);
      if (aa * bb - ab * ab <= 1e-24 * aa * bb) throw std::invalid_argument("ConvexPolytope: non-extreme vertex");
      if (ambient_ == 3) {
        const Vector c = cross3(a, b);
        if (ref.empty()) ref = c;
        else if (dot(ref, c) <= 0.0) throw std::invalid_argument("ConvexPolytope: not convex");
      }
    }
  }
}

std::size_t ConvexPolytope::affine_dim() const {
  if (vertices_.size() <= 1) return 0;
  return vertices_.size() == 2 ? 1 : 2;
}

double ConvexPolytope::measure() const {
  if (vertices_.size() == 2) return norm(sub(vertices_[1], vertices_[0]));
  double area = 0.0;
  for (std::size_t i = 1; i + 1 < vertices_.size(); ++i)
    area += triangle_area(vertices_[0], vertices_[i], vertices_[i + 1]);
  return area;
}

Point ConvexPolytope::centroid() const {
  Point c(ambient_, 0.0);
  if (vertices_.empty()) return c;
  if (vertices_.size() <= 2) {
    for (const Point& p : vertices_) c = add(c, p);
    return scaled(c, 1.0 / static_cast<double>(vertices_.size()));
  }
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < vertices_.size(); ++i) {
    const double a = triangle_area(vertices_[0], vertices_[i], vertices_[i + 1]);
    for (std::size_t j = 0; j < ambient_; ++j)
      c[j] += a * (vertices_[0][j] + vertices_[i][j] + vertices_[i + 1][j]) / 3.0;
    total += a;
  }
  if (total == 0.0) {
    for (const Point& p : vertices_) c = add(c, p);
    return scaled(c, 1.0 / static_cast<double>(vertices_.size()));
  }
  return scaled(c, 1.0 / total);
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

// ---------------------------------------------------------- Triangulation

Triangulation::Triangulation(std::size_t n, std::vector<Point> points, std::vector<std::vector<std::size_t>> cells)
    : n_(n), points_(std::move(points)), cells_(std::move(cells)) {
  std::map<std::vector<std::size_t>, std::pair<std::size_t, std::size_t>> open;
  neighbours_.assign(cells_.size(), std::vector<std::int64_t>(n_ + 1, kBoundary));
  double min_vol = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    if (cells_[c].size() != n_ + 1) throw std::invalid_argument("Triangulation: cell needs n + 1 vertices");
    std::vector<Point> v;
    for (std::size_t idx : cells_[c]) {
      if (idx >= points_.size()) throw std::invalid_argument("Triangulation: vertex index out of range");
      v.push_back(points_[idx]);
    }
    simplices_.emplace_back(std::move(v));
    delta_ = std::max(delta_, simplices_.back().diameter());
    min_vol = std::min(min_vol, simplices_.back().volume());
    for (std::size_t i = 0; i <= n_; ++i) {
      std::vector<std::size_t> key;
      for (std::size_t j = 0; j <= n_; ++j)
        if (j != i) key.push_back(cells_[c][j]);
      std::sort(key.begin(), key.end());
      auto it = open.find(key);
      if (it == open.end()) {
        open.emplace(std::move(key), std::make_pair(c, i));
        continue;
      }
      const auto [other, other_facet] = it->second;
      neighbours_[c][i] = static_cast<std::int64_t>(other);
      neighbours_[other][other_facet] = static_cast<std::int64_t>(c);
      faces_.push_back({other, other_facet, c, i});
      open.erase(it);
    }
  }
  std::sort(faces_.begin(), faces_.end(), [](const MeshFace& a, const MeshFace& b) {
    return std::tie(a.cell, a.facet) < std::tie(b.cell, b.facet);
  });
  if (!cells_.empty()) c_ = min_vol / std::pow(delta_, static_cast<double>(n_));
}

std::vector<bool> Triangulation::exterior_facets(std::size_t c) const {
  std::vector<bool> out(n_ + 1);
  for (std::size_t i = 0; i <= n_; ++i) out[i] = neighbours_[c][i] == kBoundary;
  return out;
}

Box Triangulation::bounding_box() const {
  Box b{Point(n_, std::numeric_limits<double>::infinity()), Point(n_, -std::numeric_limits<double>::infinity())};
  for (const Point& p : points_)
    for (std::size_t i = 0; i < n_; ++i) {
      b.lo[i] = std::min(b.lo[i], p[i]);
      b.hi[i] = std::max(b.hi[i], p[i]);
    }
  return b;
}

double Triangulation::total_volume() const {
  double v = 0.0;
  for (const Simplex& s : simplices_) v += s.volume();
  return v;
}

std::optional<std::size_t> Triangulation::locate(std::span<const double> x) const {
  for (std::size_t c = 0; c < simplices_.size(); ++c)
    if (simplices_[c].contains(x, 1e-12)) return c;
  return std::nullopt;
}

Triangulation freudenthal_mesh(const Box& box, std::size_t subdivisions) {
  const std::size_t n = box.dim();
  if (subdivisions == 0) throw std::invalid_argument("freudenthal_mesh: zero subdivisions");
  if (n != 2 && n != 3) throw std::invalid_argument("freudenthal_mesh: only n = 2, 3 supported");
  for (std::size_t i = 0; i < n; ++i)
    if (!(box.hi[i] > box.lo[i])) throw std::invalid_argument("freudenthal_mesh: empty box");

  const std::size_t side = subdivisions + 1;
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t i = 1; i < n; ++i) stride[i] = stride[i - 1] * side;
  const std::size_t npoints = stride[n - 1] * side;

  std::vector<Point> points(npoints, Point(n));
  for (std::size_t idx = 0; idx < npoints; ++idx)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t g = (idx / stride[i]) % side;
      // exact end points keep the boundary facets on the box faces
      points[idx][i] = g == subdivisions ? box.hi[i]
                                         : box.lo[i] + (box.hi[i] - box.lo[i]) * static_cast<double>(g) /
                                                           static_cast<double>(subdivisions);
    }

  std::vector<std::vector<std::size_t>> cells;
  std::size_t ncubes = 1;
  for (std::size_t i = 0; i < n; ++i) ncubes *= subdivisions;
  for (std::size_t cube = 0; cube < ncubes; ++cube) {
    std::size_t corner = 0, rest = cube;
    for (std::size_t i = 0; i < n; ++i) {
      corner += (rest % subdivisions) * stride[i];
      rest /= subdivisions;
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<std::size_t> cell{corner};
      std::size_t cur = corner;
      for (std::size_t axis : perm) {
        cur += stride[axis];
        cell.push_back(cur);
      }
      cells.push_back(std::move(cell));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return Triangulation(n, std::move(points), std::move(cells));
}

// ------------------------------------------------------- affine fields

Vector PiecewiseAffineField::evaluate_on(std::size_t cell, std::span<const double> x) const {
  return add(a[cell].apply(x), b[cell]);
}

std::optional<Vector> PiecewiseAffineField::evaluate(std::span<const double> x) const {
  const auto c = mesh.locate(x);
  if (!c) return std::nullopt;
  return evaluate_on(*c, x);
}

std::pair<MatrixMN, Vector> affine_fit(const Simplex& s, const std::vector<Vector>& values) {
  const std::size_t n = s.dim(), m = values.front().size();
  MatrixMN f(m, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) f(i, j) = values[j + 1][i] - values[0][i];
  // A E = F with E the edge matrix, so A^T = E^{-T} F^T
  const MatrixMN a = solve(edge_matrix(s.vertices()).transpose(), f.transpose()).transpose();
  return {a, sub(values[0], a.apply(s.vertex(0)))};
}

PiecewiseAffineField interpolate(const FieldFn& f, const Triangulation& mesh) {
  std::vector<Vector> nodal;
  nodal.reserve(mesh.points().size());
  for (const Point& p : mesh.points()) {
    Vector v = f(p);
    for (double x : v)
      if (!std::isfinite(x)) throw std::invalid_argument("interpolate: non-finite nodal value");
    nodal.push_back(std::move(v));
  }
  PiecewiseAffineField u{mesh, nodal.empty() ? 0 : nodal.front().size(), {}, {}, true};
  for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
    std::vector<Vector> values;
    for (std::size_t idx : mesh.cell_indices()[c]) values.push_back(nodal[idx]);
    auto [a, b] = affine_fit(mesh.cell(c), values);
    u.a.push_back(std::move(a));
    u.b.push_back(std::move(b));
  }
  return u;
}

double continuity_defect(const PiecewiseAffineField& u) {
  std::vector<std::optional<Vector>> seen(u.mesh.points().size());
  double worst = 0.0;
  for (std::size_t c = 0; c < u.mesh.cell_count(); ++c)
    for (std::size_t idx : u.mesh.cell_indices()[c]) {
      const Vector v = u.evaluate_on(c, u.mesh.points()[idx]);
      if (!seen[idx]) {
        seen[idx] = v;
        continue;
      }
      worst = std::max(worst, norm(sub(v, *seen[idx])) / (1.0 + norm(v)));
    }
  return worst;
}

// ---------------------------------------------------------------- slices

ConvexPolytope slice(const Simplex& cell, std::span<const double> d, double t) {
  check_unit(d);
  const std::size_t n = cell.dim();
  if (n != 2 && n != 3) throw std::invalid_argument("slice: only n = 2, 3 supported");
  std::vector<double> h(n + 1);
  for (std::size_t i = 0; i <= n; ++i) h[i] = dot(d, cell.vertex(i)) - t;
  const double eps = height_tolerance(h);

  std::vector<Point> pts;
  auto push = [&](Point p) {
    for (const Point& q : pts)
      if (norm(sub(p, q)) <= 1e-14 * (1.0 + norm(q))) return;
    pts.push_back(std::move(p));
  };
  for (std::size_t i = 0; i <= n; ++i)
    if (std::abs(h[i]) <= eps) push(cell.vertex(i));
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) {
      if (std::abs(h[i]) <= eps || std::abs(h[j]) <= eps || (h[i] > 0) == (h[j] > 0)) continue;
      const double s = h[i] / (h[i] - h[j]);
      Point p(n);
      for (std::size_t r = 0; r < n; ++r) p[r] = cell.vertex(i)[r] + s * (cell.vertex(j)[r] - cell.vertex(i)[r]);
      push(std::move(p));
    }
  if (pts.empty()) return {};
  if (n == 2 || pts.size() <= 2) {
    if (pts.size() > 2) {
      // collinear points on a 2-d slice: keep the extremes
      std::size_t bi = 0, bj = 1;
      double best = -1.0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
          if (double len = norm(sub(pts[i], pts[j])); len > best) {
            best = len;
            bi = i;
            bj = j;
          }
      pts = {pts[bi], pts[bj]};
    }
    return ConvexPolytope(n, std::move(pts));
  }
  // order the polygon by angle in the plane
  const auto [u, w] = plane_basis(d);
  Point mean(3, 0.0);
  for (const Point& p : pts) mean = add(mean, p);
  mean = scaled(mean, 1.0 / static_cast<double>(pts.size()));
  std::vector<std::pair<double, std::size_t>> ang;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vector r = sub(pts[i], mean);
    ang.emplace_back(std::atan2(dot(r, w), dot(r, u)), i);
  }
  std::sort(ang.begin(), ang.end());
  std::vector<Point> ordered;
  for (const auto& [a, i] : ang) ordered.push_back(pts[i]);
  // drop vertices that are not extreme (slice through an edge)
  std::vector<Point> hull;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const Point& prev = ordered[(i + ordered.size() - 1) % ordered.size()];
    const Point& next = ordered[(i + 1) % ordered.size()];
    if (triangle_area(prev, ordered[i], next) > 1e-15 * (1.0 + dot(mean, mean))) hull.push_back(ordered[i]);
  }
  if (hull.size() < 3) {
    std::size_t bi = 0, bj = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < ordered.size(); ++i)
      for (std::size_t j = i + 1; j < ordered.size(); ++j)
        if (double len = norm(sub(ordered[i], ordered[j])); len > best) {
          best = len;
          bi = i;
          bj = j;
        }
    return ConvexPolytope(3, {ordered[bi], ordered[bj]});
  }
  return ConvexPolytope(3, std::move(hull));
}

double slice_measure(const Simplex& cell, std::span<const double> d, double t) {
  check_unit(d);
  const std::size_t n = cell.dim();
  if (n == 2 || n == 3) {
    const ConvexPolytope p = slice(cell, d, t);
    return p.affine_dim() == n - 1 ? p.measure() : 0.0;
  }
  // density of d . X for X uniform on the simplex (a B-spline in t)
  std::vector<double> h(n + 1);
  double scale = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    h[i] = dot(d, cell.vertex(i));
    scale = std::max(scale, std::abs(h[i]));
  }
  const double spread = cell.diameter();
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(h[i] - h[j]) < 1e-9 * spread) h[i] = h[j] + 1e-9 * spread * static_cast<double>(i - j);
  double dens = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    if (h[i] <= t) continue;
    double denom = 1.0;
    for (std::size_t j = 0; j <= n; ++j)
      if (j != i) denom *= h[i] - h[j];
    dens += std::pow(h[i] - t, static_cast<double>(n - 1)) / denom;
  }
  return std::max(0.0, cell.volume() * static_cast<double>(n) * dens);
}

double coarea_sum(const Simplex& cell, std::span<const double> d, int k) {
  if (k < 1) throw std::invalid_argument("coarea_sum: k must be >= 1");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Point& v : cell.vertices()) {
    lo = std::min(lo, dot(d, v));
    hi = std::max(hi, dot(d, v));
  }
  const double kk = static_cast<double>(k);
  const auto first = static_cast<long long>(std::ceil(lo * kk - 1e-9));
  const auto last = static_cast<long long>(std::floor(hi * kk + 1e-9));
  double sum = 0.0;
  for (long long l = first; l <= last; ++l) sum += slice_measure(cell, d, static_cast<double>(l) / kk);
  return sum / kk;
}

// ------------------------------------------------------ face integrals

namespace {

std::vector<CutFamily> distinct_families(const std::vector<CutFamily>& cuts) {
  std::vector<CutFamily> out;
  for (const CutFamily& c : cuts) {
    const Vector d = canonical(c.direction);
    const bool dup = std::any_of(out.begin(), out.end(), [&](const CutFamily& o) {
      return o.k == c.k && norm(sub(o.direction, d)) <= 1e-12;
    });
    if (!dup) out.push_back({d, c.k});
  }
  return out;
}

double jump_norm(const Vector& jump, std::span<const double> normal, Norm norm_kind, JumpProduct product) {
  if (product == JumpProduct::symmetric) return evaluate(norm_kind, sym_tensor(jump, normal).matrix());
  return evaluate(norm_kind, tensor(jump, normal));
}

// Splits a convex polygon by {h(x) = level}; returns the part below then
// the part above (either may be empty).
std::pair<std::vector<Point>, std::vector<Point>> split_polygon(const std::vector<Point>& poly,
                                                                std::span<const double> d, double level,
                                                                double eps) {
  std::vector<Point> below, above;
  const std::size_t k = poly.size();
  std::vector<double> h(k);
  for (std::size_t i = 0; i < k; ++i) {
    h[i] = dot(d, poly[i]) - level;
    if (std::abs(h[i]) <= eps) h[i] = 0.0;
  }
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = (i + 1) % k;
    if (h[i] <= 0.0) below.push_back(poly[i]);
    if (h[i] >= 0.0) above.push_back(poly[i]);
    if ((h[i] < 0.0 && h[j] > 0.0) || (h[i] > 0.0 && h[j] < 0.0)) {
      const double s = h[i] / (h[i] - h[j]);
      Point p(poly[i].size());
      for (std::size_t r = 0; r < p.size(); ++r) p[r] = poly[i][r] + s * (poly[j][r] - poly[i][r]);
      below.push_back(p);
      above.push_back(std::move(p));
    }
  }
  if (below.size() < 3) below.clear();
  if (above.size() < 3) above.clear();
  return {std::move(below), std::move(above)};
}

double polygon_area(const std::vector<Point>& poly) {
  double a = 0.0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) a += triangle_area(poly[0], poly[i], poly[i + 1]);
  return a;
}

FaceIntegral face_monte_carlo(const ConvexPolytope& face, std::span<const double> normal, const FieldFn& jump,
                              Norm norm_kind, JumpProduct product, std::size_t samples, std::uint64_t seed) {
  const auto& v = face.vertices();
  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    total += triangle_area(v[0], v[i], v[i + 1]);
    cumulative.push_back(total);
  }
  Rng rng = make_stream(seed, 0x66616365ULL);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double pick = u(rng) * total;
    const std::size_t tri =
        std::min<std::size_t>(std::lower_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin(),
                              cumulative.size() - 1);
    double r1 = u(rng), r2 = u(rng);
    if (r1 + r2 > 1.0) {
      r1 = 1.0 - r1;
      r2 = 1.0 - r2;
    }
    Point p(face.ambient());
    for (std::size_t r = 0; r < p.size(); ++r)
      p[r] = v[0][r] + r1 * (v[tri + 1][r] - v[0][r]) + r2 * (v[tri + 2][r] - v[0][r]);
    const double val = jump_norm(jump(p), normal, norm_kind, product);
    sum += val;
    sum2 += val * val;
  }
  const double ns = static_cast<double>(samples);
  const double mean = sum / ns;
  const double var = std::max(0.0, sum2 / ns - mean * mean);
  return {total * mean, samples, true, total * std::sqrt(var / ns)};
}

}  // namespace

FaceIntegral face_partition_integral(const ConvexPolytope& face, std::span<const double> normal,
                                     const std::vector<CutFamily>& cuts, const FieldFn& jump, Norm norm_kind,
                                     JumpProduct product, std::size_t mc_samples, std::uint64_t seed) {
  const std::size_t n = face.ambient();
  if (face.affine_dim() + 1 != n || (n != 2 && n != 3))
    throw std::invalid_argument("face_partition_integral: face must have codimension one in R^2 or R^3");
  const std::vector<CutFamily> families = distinct_families(cuts);
  FaceIntegral out;

  if (n == 2) {
    const Point& p0 = face.vertices()[0];
    const Point& p1 = face.vertices()[1];
    const double len = norm(sub(p1, p0));
    std::vector<double> breaks{0.0, 1.0};
    for (const CutFamily& f : families) {
      const double h0 = dot(f.direction, p0), h1 = dot(f.direction, p1);
      if (std::abs(h1 - h0) <= 1e-14 * (1.0 + std::abs(h0))) continue;
      const double kk = static_cast<double>(f.k);
      const auto a = static_cast<long long>(std::floor(std::min(h0, h1) * kk));
      const auto b = static_cast<long long>(std::ceil(std::max(h0, h1) * kk));
      for (long long l = a; l <= b; ++l) {
        const double t = (static_cast<double>(l) / kk - h0) / (h1 - h0);
        if (t > 0.0 && t < 1.0) breaks.push_back(t);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> merged{breaks.front()};
    for (double t : breaks)
      if (t - merged.back() > 1e-12) merged.push_back(t);
    merged.back() = 1.0;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
      const double mid = 0.5 * (merged[i] + merged[i + 1]);
      Point x(2);
      for (std::size_t r = 0; r < 2; ++r) x[r] = p0[r] + mid * (p1[r] - p0[r]);
      out.value += len * (merged[i + 1] - merged[i]) * jump_norm(jump(x), normal, norm_kind, product);
    }
    out.pieces = merged.size() - 1;
    return out;
  }

  std::vector<std::vector<Point>> pieces{face.vertices()};
  double scale = 0.0;
  for (const Point& p : face.vertices()) scale = std::max(scale, norm(p));
  const double eps = 1e-13 * (1.0 + scale);
  for (const CutFamily& f : families) {
    const double kk = static_cast<double>(f.k);
    std::vector<std::vector<Point>> next;
    for (auto& poly : pieces) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const Point& p : poly) {
        lo = std::min(lo, dot(f.direction, p));
        hi = std::max(hi, dot(f.direction, p));
      }
      std::vector<Point> rest = std::move(poly);
      for (auto l = static_cast<long long>(std::floor(lo * kk)); l <= static_cast<long long>(std::ceil(hi * kk));
           ++l) {
        const double level = static_cast<double>(l) / kk;
        if (level <= lo + eps || level >= hi - eps) continue;
        auto [below, above] = split_polygon(rest, f.direction, level, eps);
        if (!below.empty()) next.push_back(std::move(below));
        rest = std::move(above);
        if (rest.empty()) break;
      }
      if (!rest.empty()) next.push_back(std::move(rest));
      if (next.size() > kFacePieceCap) return face_monte_carlo(face, normal, jump, norm_kind, product, mc_samples, seed);
    }
    pieces = std::move(next);
  }
  for (const auto& poly : pieces) {
    // vertex mean is interior to a convex piece
    Point mid(3, 0.0);
    for (const Point& p : poly) mid = add(mid, p);
    mid = scaled(mid, 1.0 / static_cast<double>(poly.size()));
    out.value += polygon_area(poly) * jump_norm(jump(mid), normal, norm_kind, product);
  }
  out.pieces = pieces.size();
  return out;
}

}  // namespace lamina
