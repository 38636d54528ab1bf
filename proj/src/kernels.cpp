#include "lamina/kernels.hpp"

#include "lamina/random.hpp"

#include <algorithm>
#include <cmath>

namespace lamina {

namespace {

template <typename T, typename F>
void fill(std::vector<T>& out, Exec exec, F&& body) {
  const auto n = static_cast<std::ptrdiff_t>(out.size());
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = body(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = body(static_cast<std::size_t>(i));
  }
}

}  // namespace

double ordered_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

Norm schatten_norm(LaminateMode mode) { return mode == LaminateMode::bd ? Norm::ssym : Norm::schatten1; }

std::vector<StaircaseField> build_laminates(const PiecewiseAffineField& u, LaminateMode mode, int k, Exec exec) {
  std::vector<StaircaseField> out(u.mesh.cell_count());
  fill(out, exec, [&](std::size_t c) {
    return mode == LaminateMode::bd ? build_bd_laminate(u.a[c], u.b[c], k) : build_bv_laminate(u.a[c], u.b[c], k);
  });
  return out;
}

std::vector<double> cell_variations(const PiecewiseAffineField& u, const std::vector<StaircaseField>& fields,
                                    Norm norm_kind, Exec exec) {
  std::vector<double> out(u.mesh.cell_count());
  fill(out, exec, [&](std::size_t c) {
    return variation_on_cell(fields[c], u.mesh.cell(c), norm_kind, u.mesh.exterior_facets(c));
  });
  return out;
}

std::vector<FaceIntegral> face_variations(const PiecewiseAffineField& u, const std::vector<StaircaseField>& fields,
                                          Norm norm_kind, Exec exec, std::size_t mc_samples, std::uint64_t seed) {
  const auto& faces = u.mesh.interior_faces();
  std::vector<FaceIntegral> out(faces.size());
  fill(out, exec, [&](std::size_t i) {
    const MeshFace& f = faces[i];
    const Simplex& cell = u.mesh.cell(f.cell);
    const StaircaseField& lhs = fields[f.cell];
    const StaircaseField& rhs = fields[f.neighbour];
    std::vector<CutFamily> cuts = cut_families(lhs);
    for (CutFamily& c : cut_families(rhs)) cuts.push_back(std::move(c));
    const FieldFn jump = [&](std::span<const double> x) { return sub(rhs.eval_displaced(x), lhs.eval_displaced(x)); };
    const JumpProduct product = lhs.mode == LaminateMode::bd ? JumpProduct::symmetric : JumpProduct::tensor;
    return face_partition_integral(ConvexPolytope(u.mesh.dim(), cell.facet(f.facet)), cell.outward_normal(f.facet),
                                   cuts, jump, norm_kind, product, mc_samples, seed + i);
  });
  return out;
}

double l1_error(const PiecewiseAffineField& u, const std::vector<StaircaseField>& fields, std::size_t samples,
                Exec exec) {
  const double total_volume = u.mesh.total_volume();
  std::vector<double> per_cell(u.mesh.cell_count());
  fill(per_cell, exec, [&](std::size_t c) {
    const Simplex& cell = u.mesh.cell(c);
    const double vol = cell.volume();
    const auto count = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(samples) * vol / total_volume)));
    Halton h(cell.dim());
    double sum = 0.0;
    for (std::size_t s = 0; s < count; ++s) {
      const Point x = cell.from_unit_cube(h.next());
      sum += norm(sub(fields[c].eval(x), u.evaluate_on(c, x)));
    }
    return vol * sum / static_cast<double>(count);
  });
  return ordered_sum(per_cell);
}

VariationReport measure_variation(const PiecewiseAffineField& u, const std::vector<StaircaseField>& fields,
                                  LaminateMode mode, int k, Exec exec, std::size_t mc_samples, std::uint64_t seed) {
  const Norm schatten = schatten_norm(mode);
  const std::vector<double> cf = cell_variations(u, fields, Norm::frobenius, exec);
  const std::vector<double> cs = cell_variations(u, fields, schatten, exec);
  const std::vector<FaceIntegral> ff = face_variations(u, fields, Norm::frobenius, exec, mc_samples, seed);
  const std::vector<FaceIntegral> fs = face_variations(u, fields, schatten, exec, mc_samples, seed);

  VariationReport r;
  r.k = k;
  r.mode = mode;
  r.regions.resize(u.mesh.cell_count());
  for (std::size_t c = 0; c < r.regions.size(); ++c) {
    RegionVariation& g = r.regions[c];
    g.cell = c;
    g.volume = u.mesh.cell(c).volume();
    g.frobenius = cf[c];
    g.schatten = cs[c];
    for (const StaircaseTerm& t : fields[c].terms) g.sup_bound += norm(t.c) / static_cast<double>(t.k);
    r.sup_bound = std::max(r.sup_bound, g.sup_bound);
  }
  const auto& faces = u.mesh.interior_faces();
  for (std::size_t i = 0; i < faces.size(); ++i) {
    r.regions[faces[i].cell].interface += fs[i].value;
    r.interface_frobenius += ff[i].value;
    r.interface_schatten += fs[i].value;
    r.monte_carlo_faces = r.monte_carlo_faces || ff[i].monte_carlo || fs[i].monte_carlo;
  }
  r.total_frobenius = ordered_sum(cf) + r.interface_frobenius;
  r.total_schatten = ordered_sum(cs) + r.interface_schatten;
  return r;
}

}  // namespace lamina
