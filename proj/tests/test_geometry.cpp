#include "lamina/geometry.hpp"
#include "lamina/random.hpp"
#include "lamina/rank_one.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace lamina;

namespace {

const Box kUnitSquare{{0, 0}, {1, 1}};
const Box kUnitCube{{0, 0, 0}, {1, 1, 1}};

// Length of a segment clipped to a triangle, by bisection on the
// barycentric membership test; independent of the edge-crossing code.
// bisects outward from a seed point known to lie in the triangle
double clipped_length(const Simplex& t, const Point& seed, const Vector& dir, double half) {
  auto inside = [&](double s) { return t.contains(add(seed, scaled(dir, s)), 1e-13); };
  auto refine = [&](double in, double out) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (in + out);
      (inside(mid) ? in : out) = mid;
    }
    return in;
  };
  return refine(0.0, half) - refine(0.0, -half);
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("freudenthal mesh examples") {
    const Triangulation s1 = freudenthal_mesh(kUnitSquare, 1);
    CHECK(s1.cell_count() == 2);
    for (std::size_t c = 0; c < 2; ++c) CHECK(s1.cell(c).volume() == doctest::Approx(0.5));
    const Triangulation c1 = freudenthal_mesh(kUnitCube, 1);
    CHECK(c1.cell_count() == 6);
    for (std::size_t c = 0; c < 6; ++c) CHECK(c1.cell(c).volume() == doctest::Approx(1.0 / 6));
    const Triangulation s4 = freudenthal_mesh(kUnitSquare, 4);
    CHECK(s4.cell_count() == 32);
    CHECK(s4.total_volume() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(freudenthal_mesh(kUnitSquare, 0), std::invalid_argument);
  }

  TEST_CASE("mesh regularity, tiling and face table") {
    for (std::size_t sub : {1, 2, 3, 5}) {
      const Triangulation m2 = freudenthal_mesh(kUnitSquare, sub);
      const Triangulation m3 = freudenthal_mesh(kUnitCube, sub);
      CHECK(std::abs(m2.total_volume() - 1.0) <= 1e-10);
      CHECK(std::abs(m3.total_volume() - 1.0) <= 1e-10);
      const double h = 1.0 / static_cast<double>(sub);
      CHECK(m2.mesh_size() == doctest::Approx(h * std::sqrt(2.0)));
      CHECK(m3.mesh_size() == doctest::Approx(h * std::sqrt(3.0)));
      CHECK(m2.regularity_constant() == doctest::Approx(1.0 / (2 * 2.0)));
      CHECK(m3.regularity_constant() == doctest::Approx(1.0 / (6 * std::pow(3.0, 1.5))));
      // Euler-type counts: interior faces of a Kuhn mesh
      const double n = static_cast<double>(sub);
      CHECK(m2.interior_faces().size() == static_cast<std::size_t>(3 * n * n - 2 * n));
      for (const MeshFace& f : m3.interior_faces()) {
        const Vector nu = m3.cell(f.cell).outward_normal(f.facet);
        const Vector mu = m3.cell(f.neighbour).outward_normal(f.neighbour_facet);
        CHECK(norm(add(nu, mu)) <= 1e-12);
      }
    }
  }

  TEST_CASE("cells have disjoint interiors") {
    const Triangulation m = freudenthal_mesh(kUnitCube, 2);
    Rng rng(1);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (std::size_t c = 0; c < m.cell_count(); ++c) {
      for (int s = 0; s < 20; ++s) {
        Vector w(4);
        double sum = 0;
        for (double& x : w) sum += (x = u(rng));
        Point p(3, 0.0);
        for (std::size_t v = 0; v < 4; ++v) p = add(p, scaled(m.cell(c).vertex(v), w[v] / sum));
        int owners = 0;
        for (std::size_t d = 0; d < m.cell_count(); ++d) owners += m.cell(d).contains(p, -1e-12);
        CHECK(owners == 1);
      }
    }
  }

  TEST_CASE("interpolation") {
    const Triangulation m = freudenthal_mesh(kUnitSquare, 3);
    const PiecewiseAffineField id = interpolate([](std::span<const double> x) { return Vector(x.begin(), x.end()); }, m);
    for (const MatrixMN& a : id.a) CHECK(frobenius(a - MatrixMN::identity(2)) <= 1e-10);
    const PiecewiseAffineField zero = interpolate([](std::span<const double>) { return Vector{3.0, -1.0}; }, m);
    for (const MatrixMN& a : zero.a) CHECK(frobenius(a) <= 1e-12);

    // x1^2 on a 2 x 2 mesh: slope = secant over the cell's x1 extent
    const Triangulation m2 = freudenthal_mesh(kUnitSquare, 2);
    const PiecewiseAffineField sq =
        interpolate([](std::span<const double> x) { return Vector{x[0] * x[0], 0.0}; }, m2);
    for (std::size_t c = 0; c < m2.cell_count(); ++c) {
      double lo = 1, hi = 0;
      for (const Point& p : m2.cell(c).vertices()) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
      }
      CHECK(sq.a[c](0, 0) == doctest::Approx((hi * hi - lo * lo) / (hi - lo)));
      CHECK(std::abs(sq.a[c](0, 1)) <= 1e-12);
    }
    CHECK(continuity_defect(sq) <= 1e-10);

    // projection property
    const PiecewiseAffineField smooth = interpolate(
        [](std::span<const double> x) { return Vector{std::sin(3 * x[0]) * x[1], std::exp(x[0] - x[1])}; }, m);
    const PiecewiseAffineField again = interpolate(
        [&](std::span<const double> x) { return *smooth.evaluate(x); }, m);
    Halton h(2);
    for (int s = 0; s < 100; ++s) {
      const Point p = h.next();
      CHECK(norm(sub(*smooth.evaluate(p), *again.evaluate(p))) <= 1e-10);
    }
  }

  TEST_CASE("slice measure examples") {
    const Simplex t({{0, 0}, {1, 0}, {0, 1}});
    CHECK(slice_measure(t, Vector{1, 0}, 0.5) == doctest::Approx(0.5));
    CHECK(slice_measure(t, Vector{1, 0}, 1.5) == 0.0);
    CHECK(slice_measure(t, Vector{1, 0}, -0.1) == 0.0);
    CHECK(slice_measure(t, Vector{1, 0}, 0.0) == doctest::Approx(1.0));
    const Simplex tet({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}});
    // cross-section at x1 = 1/2 is the triangle (1/2,0,0), (1/2,1/2,0), (1/2,1/2,1/2)
    CHECK(slice_measure(tet, Vector{1, 0, 0}, 0.5) == doctest::Approx(0.5 * 0.5 * 0.5));
    CHECK_THROWS_AS(slice_measure(t, Vector{1, 1}, 0.5), std::invalid_argument);
  }

  TEST_CASE("slice length against a bisection oracle") {
    Rng rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 50; ++trial) {
      const Simplex t({{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}});
      Vector d{u(rng), u(rng)};
      d = scaled(d, 1 / norm(d));
      Point lo_p, hi_p;
      double lo = INFINITY, hi = -INFINITY;
      for (const Point& p : t.vertices()) {
        if (dot(d, p) < lo) lo = dot(d, p), lo_p = p;
        if (dot(d, p) > hi) hi = dot(d, p), hi_p = p;
      }
      const double s = 0.1 + 0.8 * (u(rng) + 1) / 2;
      const double off = lo + s * (hi - lo);
      // the segment between the extreme vertices crosses the slice inside the cell
      const Point seed = add(lo_p, scaled(sub(hi_p, lo_p), s));
      const Vector tangent{-d[1], d[0]};
      CHECK(slice_measure(t, d, off) == doctest::Approx(clipped_length(t, seed, tangent, 4.0)).epsilon(1e-9));
    }
  }

  TEST_CASE("slice density integrates to the volume (n = 4 route)") {
    const Simplex s4({{0, 0, 0, 0}, {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 1, 1, 0}, {1, 1, 1, 1}});
    Vector d{0.3, -0.5, 0.7, 0.4};
    d = scaled(d, 1 / norm(d));
    double lo = INFINITY, hi = -INFINITY;
    for (const Point& p : s4.vertices()) {
      lo = std::min(lo, dot(d, p));
      hi = std::max(hi, dot(d, p));
    }
    const int steps = 20000;
    double integral = 0.0;
    for (int i = 0; i < steps; ++i) integral += slice_measure(s4, d, lo + (i + 0.5) * (hi - lo) / steps);
    integral *= (hi - lo) / steps;
    CHECK(integral == doctest::Approx(s4.volume()).epsilon(1e-6));
  }

  TEST_CASE("coarea sums") {
    const Simplex t({{0, 0}, {1, 0}, {0, 1}});
    CHECK(coarea_sum(t, Vector{1, 0}, 2) == doctest::Approx(0.75));
    for (int k : {8, 16, 32, 64, 128}) CHECK(std::abs(coarea_sum(t, Vector{1, 0}, k) - 0.5) <= 2.0 / k);
    Vector d{std::cos(1.0), std::sin(1.0)};
    CHECK(coarea_sum(t, d, 256) == doctest::Approx(0.5).epsilon(0.02));
    // the aligned case is exactly first order: sum - vol = 1 / (2k)
    for (int k : {8, 16, 32, 64})
      CHECK(coarea_sum(t, Vector{1, 0}, k) - 0.5 == doctest::Approx(0.5 / k).epsilon(1e-9));
  }

  TEST_CASE("face partition integral") {
    const ConvexPolytope seg(2, {{0, 0}, {0, 1}});
    const Vector nu{1, 0};
    const FieldFn none = [](std::span<const double>) { return Vector{0, 0}; };
    CHECK(face_partition_integral(seg, nu, {{Vector{0, 1}, 4}}, none, Norm::frobenius, JumpProduct::symmetric).value ==
          0.0);
    const Vector h{0.3, -0.4};
    const FieldFn constant = [&](std::span<const double>) { return h; };
    const double ref = frobenius(sym_tensor(h, nu).matrix());
    CHECK(face_partition_integral(seg, nu, {}, constant, Norm::frobenius, JumpProduct::symmetric).value ==
          doctest::Approx(ref));

    // staircase jump along the face: floor(4 y)/4 on [0,1] integrates to 3/8
    const FieldFn stairs = [](std::span<const double> x) { return Vector{std::floor(4 * x[1]) / 4, 0}; };
    const FaceIntegral fi =
        face_partition_integral(seg, nu, {{Vector{0, 1}, 4}}, stairs, Norm::frobenius, JumpProduct::tensor);
    CHECK(fi.value == doctest::Approx(0.375));
    CHECK(fi.pieces == 4);

    const ConvexPolytope tri(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
    const Vector nz{0, 0, 1};
    const FieldFn stairs3 = [](std::span<const double> x) {
      return Vector{std::floor(4 * x[0]) / 4 + std::floor(4 * x[1]) / 4, 0, 0};
    };
    // exact: sum over the grid squares clipped to the triangle, computed by a fine midpoint rule
    double ref3 = 0.0;
    const int g = 2000;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        const double x = (i + 0.5) / g, y = (j + 0.5) / g;
        if (x + y < 1) ref3 += (std::floor(4 * x) / 4 + std::floor(4 * y) / 4) / (double(g) * g);
      }
    const FaceIntegral f3 = face_partition_integral(tri, nz, {{Vector{1, 0, 0}, 4}, {Vector{0, 1, 0}, 4}}, stairs3,
                                                    Norm::frobenius, JumpProduct::tensor);
    CHECK(f3.value == doctest::Approx(ref3).epsilon(1e-3));
    CHECK_FALSE(f3.monte_carlo);
    CHECK_THROWS_AS(face_partition_integral(ConvexPolytope(2, {{0, 0}}), nu, {}, constant, Norm::frobenius,
                                            JumpProduct::tensor),
                    std::invalid_argument);
  }
}
