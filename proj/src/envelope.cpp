#include "lamina/envelope.hpp"

#include "lamina/norms.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lamina {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

constexpr std::uint64_t kDualStream = 0x6475616cULL;  // separates dual samples from trials

double frob_inner(const MatrixMN& a, const MatrixMN& b) { return dot(a.data(), b.data()); }

double tolerance(const MatrixMN& a) { return 1e-10 * (1.0 + frobenius(a)); }

// Calls eval(i) for i in [0, count) and returns the results in index order.
template <typename F>
std::vector<double> evaluate_all(std::size_t count, Exec exec, F&& eval) {
  std::vector<double> out(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  if (exec == Exec::openmp) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = eval(static_cast<std::size_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = eval(static_cast<std::size_t>(i));
  }
  return out;
}

// Pieces (M w_i) (x) (W^{-1})_{i,:}; they sum to M W W^{-1} = M.
bool basis_split(const MatrixMN& m, Rng& rng, std::vector<RankOnePiece>& out) {
  const std::size_t n = m.cols();
  const MatrixMN w = gaussian_matrix(rng, n, n);
  MatrixMN winv;
  try {
    winv = inverse(w);
  } catch (const std::domain_error&) {
    return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    Vector left = m.apply(w.col(i));
    if (norm(left) == 0.0) continue;
    out.push_back({std::move(left), winv.row(i), false, PieceTag::general});
  }
  return true;
}

// Pieces of W M' W^T with M' = W^{-1} S W^{-T}:
// M'_ii w_i (.) w_i and 2 M'_ij w_i (.) w_j for i < j.
bool congruence_split(const SymMatrix& s, Rng& rng, std::vector<RankOnePiece>& out) {
  const std::size_t n = s.dim();
  const MatrixMN w = gaussian_matrix(rng, n, n);
  MatrixMN winv;
  try {
    winv = inverse(w);
  } catch (const std::domain_error&) {
    return false;
  }
  const MatrixMN mp = winv * s.matrix() * winv.transpose();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double c = (i == j ? 1.0 : mp(i, j) + mp(j, i));
      const double coeff = i == j ? mp(i, i) : c;
      if (coeff == 0.0) continue;
      out.push_back({scaled(w.col(i), coeff), w.col(j), true, PieceTag::general});
    }
  }
  return true;
}

// Residual as a (.) b when it has at most one positive and one negative
// eigenvalue above tolerance.
std::optional<RankOnePiece> sym_rank_one_residual(const SymMatrix& r, double tol) {
  const Spectrum sp = eigen_sym(r);
  const std::size_t n = r.dim();
  std::size_t npos = 0, nneg = 0, ipos = 0, ineg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (sp.values[i] > tol) {
      ++npos;
      ipos = i;
    } else if (sp.values[i] < -tol) {
      ++nneg;
      ineg = i;
    }
  }
  if (npos > 1 || nneg > 1) return std::nullopt;
  RankOnePiece p{Vector(n, 0.0), Vector(n, 0.0), true, PieceTag::general};
  const double sp_pos = npos ? std::sqrt(sp.values[ipos]) : 0.0;
  const double sp_neg = nneg ? std::sqrt(-sp.values[ineg]) : 0.0;
  const Vector ep = npos ? sp.vector(ipos) : Vector(n, 0.0);
  const Vector en = nneg ? sp.vector(ineg) : Vector(n, 0.0);
  if (npos && nneg) {
    for (std::size_t i = 0; i < n; ++i) {
      p.left[i] = sp_pos * ep[i] + sp_neg * en[i];
      p.right[i] = sp_pos * ep[i] - sp_neg * en[i];
    }
  } else if (npos) {
    p.left = scaled(ep, sp_pos);
    p.right = p.left;
  } else if (nneg) {
    p.left = scaled(en, sp_neg);
    p.right = scaled(en, -sp_neg);
  }
  return p;
}

}  // namespace

std::optional<Decomposition> random_rank_one_split(const MatrixMN& a, Rng& rng) {
  std::vector<RankOnePiece> pieces;
  std::bernoulli_distribution split_first(0.5);
  if (split_first(rng)) {
    std::uniform_real_distribution<double> amp(0.1, 2.0);
    const double scale = amp(rng) * (frobenius(a) + 1e-3) / std::sqrt(static_cast<double>(a.rows() * a.cols()));
    const MatrixMN b = gaussian_matrix(rng, a.rows(), a.cols()) * scale;
    if (!basis_split(b, rng, pieces) || !basis_split(a - b, rng, pieces)) return std::nullopt;
  } else if (!basis_split(a, rng, pieces)) {
    return std::nullopt;
  }
  if (!pieces.empty()) pieces.pop_back();

  Decomposition d{std::move(pieces), a};
  const MatrixMN residual = a - d.sum();
  const Svd s = svd(residual);
  const double tol = tolerance(a);
  if (s.values.size() > 1 && s.values[1] > tol) return std::nullopt;
  if (s.values[0] > 0.0) d.pieces.push_back({scaled(s.u.col(0), s.values[0]), s.v.col(0), false, PieceTag::general});
  if (d.reconstruction_error() > tol) return std::nullopt;
  return d;
}

std::optional<Decomposition> random_sym_rank_one_split(const SymMatrix& a, Rng& rng) {
  std::vector<RankOnePiece> pieces;
  std::bernoulli_distribution split_first(0.5);
  if (split_first(rng)) {
    std::uniform_real_distribution<double> amp(0.1, 2.0);
    const double scale = amp(rng) * (frobenius(a.matrix()) + 1e-3) / static_cast<double>(a.dim());
    const SymMatrix b(gaussian_matrix(rng, a.dim(), a.dim()) * scale);
    if (!congruence_split(b, rng, pieces) || !congruence_split(SymMatrix(a.matrix() - b.matrix()), rng, pieces))
      return std::nullopt;
  } else if (!congruence_split(a, rng, pieces)) {
    return std::nullopt;
  }
  if (!pieces.empty()) pieces.pop_back();

  Decomposition d{std::move(pieces), a.matrix()};
  const double tol = tolerance(a.matrix());
  const auto last = sym_rank_one_residual(SymMatrix(a.matrix() - d.sum()), tol);
  if (!last) return std::nullopt;
  if (!last->is_zero()) d.pieces.push_back(*last);
  if (d.reconstruction_error() > tol) return std::nullopt;
  return d;
}

EnvelopeEstimate dual_bound_s1(const MatrixMN& a, std::size_t samples, const OracleOptions& opt) {
  if (samples == 0) throw std::invalid_argument("dual_bound_s1: samples must be >= 1");
  const std::size_t m = a.rows(), n = a.cols(), k = std::min(m, n);
  auto witness = [&](std::size_t s) {
    Rng rng = make_stream(opt.seed ^ kDualStream, s);
    const MatrixMN q = random_orthonormal_columns(rng, m, k);
    const MatrixMN p = random_orthonormal_columns(rng, n, k);
    return q * p.transpose();
  };
  const std::vector<double> values = evaluate_all(samples, opt.exec, [&](std::size_t s) {
    return frob_inner(a, witness(s));
  });

  const Svd sv = svd(a);
  MatrixMN best(m, n);
  for (std::size_t i = 0; i < n; ++i)
    if (sv.values[i] > 0.0) best += tensor(sv.u.col(i), sv.v.col(i));
  EnvelopeEstimate e;
  e.lower = frob_inner(a, best);
  e.witness_dual = best;
  std::size_t best_sample = samples;
  for (std::size_t s = 0; s < samples; ++s)
    if (values[s] > e.lower) {
      e.lower = values[s];
      best_sample = s;
    }
  if (best_sample < samples) e.witness_dual = witness(best_sample);
  return e;
}

EnvelopeEstimate envelope_upper_s1(const MatrixMN& a, std::size_t trials, const OracleOptions& opt) {
  if (trials == 0) throw std::invalid_argument("envelope_upper_s1: trials must be >= 1");
  const std::vector<double> costs = evaluate_all(trials, opt.exec, [&](std::size_t t) {
    Rng rng = make_stream(opt.seed, t);
    const auto d = random_rank_one_split(a, rng);
    return d ? d->cost() : std::numeric_limits<double>::quiet_NaN();
  });
  EnvelopeEstimate e;
  e.witness_decomposition = bv_decompose(a);
  e.upper = e.witness_decomposition.cost();
  std::size_t best = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    if (std::isnan(costs[t])) {
      ++e.rejected_trials;
      continue;
    }
    ++e.accepted_trials;
    if (costs[t] < e.upper) {
      e.upper = costs[t];
      best = t;
    }
  }
  if (best < trials) {
    Rng rng = make_stream(opt.seed, best);
    e.witness_decomposition = *random_rank_one_split(a, rng);
  }
  return e;
}

EnvelopeEstimate envelope_s1(const MatrixMN& a, std::size_t samples, std::size_t trials, const OracleOptions& opt) {
  EnvelopeEstimate e = envelope_upper_s1(a, trials, opt);
  const EnvelopeEstimate d = dual_bound_s1(a, samples, opt);
  e.lower = d.lower;
  e.witness_dual = d.witness_dual;
  return e;
}

EnvelopeEstimate dual_bound_ssym(const SymMatrix& a, std::size_t samples, const OracleOptions& opt) {
  if (samples == 0) throw std::invalid_argument("dual_bound_ssym: samples must be >= 1");
  const std::size_t n = a.dim();
  auto witness = [&](std::size_t s) {
    Rng rng = make_stream(opt.seed ^ kDualStream, s);
    const MatrixMN q = random_orthogonal(rng, n);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> angle(0.0, 0.5 * 3.14159265358979323846);
    const double t = angle(rng);
    // X = Q diag(x) Q^T, Y = Q diag(y) Q^T with entries in [0, 1]
    MatrixMN w(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double coeff = std::cos(t) * u(rng) - std::sin(t) * u(rng);
      const Vector qk = q.col(k);
      w += tensor(qk, qk) * coeff;
    }
    return w;
  };
  const std::vector<double> values = evaluate_all(samples, opt.exec, [&](std::size_t s) {
    return frob_inner(a.matrix(), witness(s));
  });

  const Spectrum sp = eigen_sym(a);
  double neg = 0.0, pos = 0.0;
  for (double l : sp.values) (l > 0.0 ? pos : neg) += l;
  const double total = std::hypot(neg, pos);
  MatrixMN best(n, n);
  if (total > 0.0) {
    for (std::size_t k = 0; k < n; ++k) {
      const Vector e = sp.vector(k);
      if (sp.values[k] > 0.0) best += tensor(e, e) * (pos / total);
      if (sp.values[k] < 0.0) best -= tensor(e, e) * (-neg / total);
    }
  }
  EnvelopeEstimate e;
  e.lower = frob_inner(a.matrix(), best);
  e.witness_dual = best;
  std::size_t best_sample = samples;
  for (std::size_t s = 0; s < samples; ++s)
    if (values[s] > e.lower) {
      e.lower = values[s];
      best_sample = s;
    }
  if (best_sample < samples) e.witness_dual = witness(best_sample);
  return e;
}

EnvelopeEstimate envelope_upper_ssym(const SymMatrix& a, std::size_t trials, const OracleOptions& opt) {
  if (trials == 0) throw std::invalid_argument("envelope_upper_ssym: trials must be >= 1");
  const std::vector<double> costs = evaluate_all(trials, opt.exec, [&](std::size_t t) {
    Rng rng = make_stream(opt.seed, t);
    const auto d = random_sym_rank_one_split(a, rng);
    return d ? d->cost() : std::numeric_limits<double>::quiet_NaN();
  });
  EnvelopeEstimate e;
  e.witness_decomposition = bd_decompose(a);
  e.upper = e.witness_decomposition.cost();
  std::size_t best = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    if (std::isnan(costs[t])) {
      ++e.rejected_trials;
      continue;
    }
    ++e.accepted_trials;
    if (costs[t] < e.upper) {
      e.upper = costs[t];
      best = t;
    }
  }
  if (best < trials) {
    Rng rng = make_stream(opt.seed, best);
    e.witness_decomposition = *random_sym_rank_one_split(a, rng);
  }
  return e;
}

EnvelopeEstimate envelope_ssym(const SymMatrix& a, std::size_t samples, std::size_t trials,
                               const OracleOptions& opt) {
  EnvelopeEstimate e = envelope_upper_ssym(a, trials, opt);
  const EnvelopeEstimate d = dual_bound_ssym(a, samples, opt);
  e.lower = d.lower;
  e.witness_dual = d.witness_dual;
  return e;
}

}  // namespace lamina
