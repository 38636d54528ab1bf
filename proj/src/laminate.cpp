#include "lamina/laminate.hpp"

#include "lamina/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lamina {

double step_eval(int k, double t) {
  if (k < 1) throw std::invalid_argument("step_eval: k must be >= 1");
  const double kk = static_cast<double>(k);
  double i = std::floor(kk * t);
  // k t can round across an integer; restore s <= t < s + 1/k
  if (i / kk > t) i -= 1.0;
  else if ((i + 1.0) / kk <= t) i += 1.0;
  return i / kk;
}

Vector StaircaseField::eval(std::span<const double> x) const {
  Vector out = add(affine.apply(x), b);
  for (const StaircaseTerm& t : terms) {
    const double s = step_eval(t.k, dot(t.d, x));
    for (std::size_t i = 0; i < m; ++i) out[i] += t.c[i] * s;
  }
  return out;
}

Vector StaircaseField::eval_displaced(std::span<const double> x) const {
  Vector out = add(affine.apply(x), b);
  for (const StaircaseTerm& t : terms) {
    const Vector d_hat = canonical(t.d);
    const double eps = 1e-9 / static_cast<double>(t.k);
    const double s = step_eval(t.k, dot(t.d, x) - eps * dot(t.d, d_hat));
    for (std::size_t i = 0; i < m; ++i) out[i] += t.c[i] * s;
  }
  return out;
}

MatrixMN StaircaseField::jump_matrix(std::span<const double> jump, std::span<const double> d_hat) const {
  return mode == LaminateMode::bd ? sym_tensor(jump, d_hat).matrix() : tensor(jump, d_hat);
}

StaircaseField build_bv_laminate(const MatrixMN& a, std::span<const double> b, int k) {
  if (k < 1) throw std::invalid_argument("build_bv_laminate: k must be >= 1");
  StaircaseField f{a.cols(), a.rows(), LaminateMode::bv, MatrixMN(a.rows(), a.cols()), Vector(b.begin(), b.end()), {}};
  for (const RankOnePiece& p : bv_decompose(a).pieces) {
    if (p.is_zero()) continue;
    const double len = norm(p.right);
    f.terms.push_back({scaled(p.left, len), scaled(p.right, 1.0 / len), k});
  }
  return f;
}

namespace {

StaircaseField bd_from_decomposition(const MatrixMN& a, std::span<const double> b, int k, const Decomposition& dec) {
  if (k < 1) throw std::invalid_argument("build_bd_laminate: k must be >= 1");
  if (!a.square()) throw std::invalid_argument("build_bd_laminate: A must be square");
  StaircaseField f{a.cols(), a.rows(), LaminateMode::bd, skew_part(a), Vector(b.begin(), b.end()), {}};
  for (const RankOnePiece& p : dec.pieces) {
    if (p.is_zero()) continue;
    const double la = norm(p.left), lb = norm(p.right);
    if (p.tag == PieceTag::same_sign) {
      f.terms.push_back({scaled(p.left, lb), scaled(p.right, 1.0 / lb), k});
      continue;
    }
    const double cosine = dot(p.left, p.right) / (la * lb);
    const double sine = std::sqrt(std::max(0.0, 1.0 - cosine * cosine));
    const Vector beta_hat = scaled(p.right, 1.0 / lb);
    if (sine <= kParallelSine) {
      f.terms.push_back({sym_tensor(p.left, p.right).matrix().apply(beta_hat), beta_hat, k});
      continue;
    }
    f.terms.push_back({scaled(p.left, 0.5 * lb), beta_hat, k});
    f.terms.push_back({scaled(p.right, 0.5 * la), scaled(p.left, 1.0 / la), k});
  }
  return f;
}

}  // namespace

StaircaseField build_bd_laminate(const MatrixMN& a, std::span<const double> b, int k) {
  return bd_from_decomposition(a, b, k, bd_decompose(SymMatrix(a)));
}

StaircaseField build_bd_laminate(const MatrixMN& a, std::span<const double> b, int k, const Spectrum& spectrum) {
  return bd_from_decomposition(a, b, k, bd_decompose(SymMatrix(a), spectrum));
}

namespace {

struct Crossing {
  double offset;
  Vector jump;
  int k;
};

struct Family {
  Vector d_hat;
  std::vector<Crossing> crossings;
};

}  // namespace

double variation_on_cell(const StaircaseField& field, const Simplex& cell, Norm norm_kind,
                         const std::vector<bool>& exterior_facets) {
  std::vector<Family> families;
  for (const StaircaseTerm& t : field.terms) {
    const Vector d_hat = canonical(t.d);
    const double sign = dot(t.d, d_hat) > 0.0 ? 1.0 : -1.0;
    auto it = std::find_if(families.begin(), families.end(),
                           [&](const Family& f) { return norm(sub(f.d_hat, d_hat)) <= kDirectionTolerance; });
    if (it == families.end()) {
      families.push_back({d_hat, {}});
      it = families.end() - 1;
    }
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Point& v : cell.vertices()) {
      lo = std::min(lo, dot(it->d_hat, v));
      hi = std::max(hi, dot(it->d_hat, v));
    }
    const double kk = static_cast<double>(t.k);
    const Vector jump = scaled(t.c, sign / kk);
    for (auto l = static_cast<long long>(std::floor(lo * kk)) - 1; l <= static_cast<long long>(std::ceil(hi * kk)) + 1;
         ++l) {
      const double o = static_cast<double>(l) / kk;
      if (o < lo - 2e-12 || o > hi + 2e-12) continue;
      it->crossings.push_back({o, jump, t.k});
    }
  }

  double total = 0.0;
  for (Family& f : families) {
    std::sort(f.crossings.begin(), f.crossings.end(),
              [](const Crossing& a, const Crossing& b) { return a.offset < b.offset; });
    std::vector<Crossing> merged;
    for (Crossing& c : f.crossings) {
      if (!merged.empty() && c.offset - merged.back().offset <= kOffsetTolerance) {
        merged.back().jump = add(merged.back().jump, c.jump);
        merged.back().k = std::max(merged.back().k, c.k);
      } else {
        merged.push_back(std::move(c));
      }
    }
    for (const Crossing& c : merged) {
      if (norm(c.jump) == 0.0) continue;
      auto on_plane = [&](const Point& v) {
        return std::abs(dot(f.d_hat, v) - c.offset) <= kOffsetTolerance * (1.0 + std::abs(c.offset));
      };
      bool boundary = false;
      for (std::size_t i = 0; i < exterior_facets.size() && !boundary; ++i) {
        if (!exterior_facets[i]) continue;
        const auto facet = cell.facet(i);
        boundary = std::all_of(facet.begin(), facet.end(), on_plane);
      }
      if (boundary) continue;
      double offset = c.offset;
      if (std::any_of(cell.vertices().begin(), cell.vertices().end(), on_plane))
        offset += 1e-9 / static_cast<double>(c.k);
      const double measure = slice_measure(cell, f.d_hat, offset);
      if (measure == 0.0) continue;
      total += measure * evaluate(norm_kind, field.jump_matrix(c.jump, f.d_hat));
    }
  }
  return total;
}

std::vector<CutFamily> cut_families(const StaircaseField& field) {
  std::vector<CutFamily> out;
  for (const StaircaseTerm& t : field.terms) {
    const Vector d_hat = canonical(t.d);
    const bool dup = std::any_of(out.begin(), out.end(), [&](const CutFamily& c) {
      return c.k == t.k && norm(sub(c.direction, d_hat)) <= kDirectionTolerance;
    });
    if (!dup) out.push_back({d_hat, t.k});
  }
  return out;
}

SupError sup_error(const StaircaseField& field, const MatrixMN& a, std::span<const double> b, const Simplex& region,
                   std::size_t samples) {
  SupError e;
  for (const StaircaseTerm& t : field.terms) e.bound += norm(t.c) / static_cast<double>(t.k);
  Halton h(region.dim());
  for (std::size_t s = 0; s < samples; ++s) {
    const Point x = region.from_unit_cube(h.next());
    const Vector target = add(a.apply(x), b);
    e.empirical = std::max(e.empirical, norm(sub(field.eval(x), target)));
  }
  return e;
}

}  // namespace lamina
